#include "bfa/cube_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bfa {

namespace {

void check_kind(const std::vector<double>& values, ValueKind kind) {
  for (double v : values) {
    if (!std::isfinite(v)) throw spec_error("cube function value is not finite");
    switch (kind) {
      case ValueKind::boolean:
        if (v != 1.0 && v != -1.0)
          throw spec_error("boolean table entry outside {-1,+1}");
        break;
      case ValueKind::derivative:
        if (v != 1.0 && v != -1.0 && v != 0.0)
          throw spec_error("derivative table entry outside {-1,0,+1}");
        break;
      case ValueKind::unit:
        if (v < 0.0 || v > 1.0)
          throw spec_error("unit table entry outside [0,1]");
        break;
      case ValueKind::general:
        break;
    }
  }
}

}  // namespace

CubeFunction::CubeFunction(int n, std::vector<double> values, ValueKind kind)
    : n_(n), kind_(kind), values_(std::move(values)) {
  if (n < 1) throw spec_error("dimension must be at least 1");
  if (n > max_exact_dim)
    throw capacity_error("dimension " + std::to_string(n) +
                         " exceeds exact-table limit " +
                         std::to_string(max_exact_dim));
  if (values_.size() != (std::size_t{1} << n))
    throw spec_error("table length does not equal 2^n");
  check_kind(values_, kind_);
}

CubeFunction derivative(const CubeFunction& f, int coord) {
  if (coord < 0 || coord >= f.dim()) throw spec_error("coordinate out of range");
  const std::uint32_t bit = std::uint32_t{1} << coord;
  std::vector<double> out(f.size());
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (m & bit) continue;
    const double d = (f[m | bit] - f[m]) / 2.0;
    out[m] = d;
    out[m | bit] = d;
  }
  ValueKind kind = f.kind() == ValueKind::boolean ? ValueKind::derivative
                                                  : ValueKind::general;
  return CubeFunction(f.dim(), std::move(out), kind);
}

CubeFunction abs_derivative(const CubeFunction& f, int coord) {
  CubeFunction d = derivative(f, coord);
  std::vector<double> out = d.values();
  for (double& v : out) v = std::fabs(v);
  ValueKind kind = f.kind() == ValueKind::boolean ? ValueKind::unit
                                                  : ValueKind::general;
  return CubeFunction(f.dim(), std::move(out), kind);
}

CubeFunction monotonize(const CubeFunction& f, int coord) {
  if (coord < 0 || coord >= f.dim()) throw spec_error("coordinate out of range");
  const std::uint32_t bit = std::uint32_t{1} << coord;
  std::vector<double> out = f.values();
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (m & bit) continue;
    const double lo = out[m], hi = out[m | bit];
    out[m] = std::min(lo, hi);
    out[m | bit] = std::max(lo, hi);
  }
  return CubeFunction(f.dim(), std::move(out), f.kind());
}

CubeFunction monotonize_chain(const CubeFunction& f) {
  CubeFunction g = f;
  for (int i = 0; i < f.dim(); ++i) g = monotonize(g, i);
  return g;
}

bool is_monotone(const CubeFunction& f) {
  for (int i = 0; i < f.dim(); ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t m = 0; m < f.size(); ++m) {
      if (m & bit) continue;
      if (f[m] > f[m | bit]) return false;
    }
  }
  return true;
}

CubeFunction function_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(std::string("bad function JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("values"))
    throw spec_error("function JSON needs \"n\" and \"values\"");
  const int n = j["n"].get<int>();
  if (n > CubeFunction::max_exact_dim)
    throw capacity_error("function file dimension exceeds exact limit");
  std::vector<double> values = j["values"].get<std::vector<double>>();
  bool boolean = true;
  for (double v : values)
    if (v != 1.0 && v != -1.0) boolean = false;
  return CubeFunction(n, std::move(values),
                      boolean ? ValueKind::boolean : ValueKind::general);
}

std::string function_to_json(const CubeFunction& f) {
  nlohmann::json j;
  j["n"] = f.dim();
  j["values"] = f.values();
  return j.dump();
}

CubeFunction load_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open function file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return function_from_json(buf.str());
}

}  // namespace bfa
