#include "bfa/families.hpp"

#include <bit>
#include <cstdint>

#include "bfa/rng.hpp"

namespace bfa {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw spec_error("bad " + what + ": " + s);
    return v;
  } catch (const spec_error&) {
    throw;
  } catch (...) {
    throw spec_error("bad " + what + ": " + s);
  }
}

int parse_dim(const std::string& s) {
  long n = parse_int(s, "dimension");
  if (n < 1) throw spec_error("dimension must be at least 1");
  if (n > CubeFunction::max_exact_dim)
    throw capacity_error("dimension exceeds exact-table limit");
  return static_cast<int>(n);
}

CubeFunction from_predicate(int n, auto&& pred) {
  std::vector<double> v(std::size_t{1} << n);
  for (std::uint32_t m = 0; m < v.size(); ++m) v[m] = pred(m) ? 1.0 : -1.0;
  return CubeFunction(n, std::move(v), ValueKind::boolean);
}

}  // namespace

CubeFunction make_function(const std::string& spec) {
  auto parts = split(spec, ':');
  if (parts.empty() || parts[0].empty()) throw spec_error("empty function spec");
  const std::string& name = parts[0];
  const std::size_t nargs = parts.size() - 1;

  if (name == "file") {
    if (nargs != 1) throw spec_error("file spec needs a path");
    return load_function_file(parts[1]);
  }
  if (name == "dictator") {
    if (nargs != 1) throw spec_error("dictator spec needs n");
    int n = parse_dim(parts[1]);
    return from_predicate(n, [](std::uint32_t m) { return (m & 1u) != 0; });
  }
  if (name == "parity") {
    if (nargs != 1) throw spec_error("parity spec needs n");
    int n = parse_dim(parts[1]);
    // prod y_i = (-1)^{# coordinates equal to -1}
    return from_predicate(
        n, [n](std::uint32_t m) { return ((n - std::popcount(m)) % 2) == 0; });
  }
  if (name == "majority") {
    if (nargs != 1) throw spec_error("majority spec needs n");
    int n = parse_dim(parts[1]);
    if (n % 2 == 0) throw spec_error("majority needs odd n");
    return from_predicate(
        n, [n](std::uint32_t m) { return 2 * std::popcount(m) > n; });
  }
  if (name == "tribes") {
    if (nargs != 2) throw spec_error("tribes spec needs w and s");
    long w = parse_int(parts[1], "tribe width");
    long s = parse_int(parts[2], "tribe count");
    if (w < 1 || s < 1) throw spec_error("tribes parameters must be positive");
    long n = w * s;
    if (n > CubeFunction::max_exact_dim)
      throw capacity_error("tribes dimension exceeds exact-table limit");
    return from_predicate(static_cast<int>(n), [w, s](std::uint32_t m) {
      for (long b = 0; b < s; ++b) {
        const std::uint32_t block =
            ((std::uint32_t{1} << w) - 1u) << (b * w);
        if ((m & block) == block) return true;
      }
      return false;
    });
  }
  if (name == "threshold") {
    if (nargs != 2) throw spec_error("threshold spec needs n and k");
    int n = parse_dim(parts[1]);
    long k = parse_int(parts[2], "threshold");
    if (k < 0 || k > n) throw spec_error("threshold k outside [0,n]");
    return from_predicate(
        n, [k](std::uint32_t m) { return std::popcount(m) >= k; });
  }
  if (name == "subcube") {
    if (nargs != 2) throw spec_error("subcube spec needs n and k");
    int n = parse_dim(parts[1]);
    long k = parse_int(parts[2], "subcube codimension");
    if (k < 1 || k > n) throw spec_error("subcube k outside [1,n]");
    const std::uint32_t need = (std::uint32_t{1} << k) - 1u;
    return from_predicate(
        n, [need](std::uint32_t m) { return (m & need) == need; });
  }
  if (name == "random") {
    if (nargs != 2 && nargs != 3) throw spec_error("random spec needs n and seed");
    int n = parse_dim(parts[1]);
    long seed = parse_int(parts[2], "seed");
    double bias = 0.5;
    if (nargs == 3) {
      try {
        bias = std::stod(parts[3]);
      } catch (...) {
        throw spec_error("bad bias: " + parts[3]);
      }
      if (!(bias > 0.0 && bias < 1.0)) throw spec_error("bias outside (0,1)");
    }
    Rng rng(derive_stream(static_cast<std::uint64_t>(seed), 0x66616D696C79ULL));
    std::vector<double> v(std::size_t{1} << n);
    for (auto& x : v) x = rng.next_unit() < bias ? 1.0 : -1.0;
    return CubeFunction(n, std::move(v), ValueKind::boolean);
  }
  throw spec_error("unknown function family: " + name);
}

std::vector<std::string> default_corpus() {
  return {"dictator:8",    "parity:5",   "majority:3", "majority:9",
          "majority:15",   "tribes:3:4", "threshold:9:6", "subcube:8:3",
          "random:6:1",    "random:6:2", "random:6:3", "random:6:4",
          "random:6:5"};
}

}  // namespace bfa
