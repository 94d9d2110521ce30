#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfa {

// Thrown when a request exceeds the exact-computation table limits.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for malformed family specs, corpora and file inputs.
struct spec_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ValueKind {
  boolean,     // values in {-1, +1}
  derivative,  // values in {-1, 0, +1}
  unit,        // values in [0, 1]
  general,     // any finite real
};

// Truth table of a real-valued function on {-1,1}^n.
//
// Vertex indexing: bit i of the mask (bit 0 = coordinate 0) is set iff
// coordinate i equals +1. This makes the Walsh-Hadamard transform the
// standard butterfly and coordinate restriction a bit mask.
class CubeFunction {
 public:
  static constexpr int max_exact_dim = 24;

  CubeFunction(int n, std::vector<double> values, ValueKind kind);

  int dim() const { return n_; }
  std::uint32_t size() const { return std::uint32_t{1} << n_; }
  ValueKind kind() const { return kind_; }
  double operator[](std::uint32_t mask) const { return values_[mask]; }
  const std::vector<double>& values() const { return values_; }

 private:
  int n_;
  ValueKind kind_;
  std::vector<double> values_;
};

// Discrete derivative in direction `coord` (0-based):
//   (f(y with coord=+1) - f(y with coord=-1)) / 2,
// constant in `coord`. Boolean input yields a {-1,0,1}-valued table.
CubeFunction derivative(const CubeFunction& f, int coord);

// Pointwise absolute value of the derivative; [0,1]-valued for boolean f.
CubeFunction abs_derivative(const CubeFunction& f, int coord);

// Monotone shift along `coord`: the larger value moves to the coord=+1 end
// of each edge, the smaller to the coord=-1 end.
CubeFunction monotonize(const CubeFunction& f, int coord);

// Applies monotonize for every coordinate in order; result is monotone.
CubeFunction monotonize_chain(const CubeFunction& f);

bool is_monotone(const CubeFunction& f);

// {"n": <int>, "values": [... 2^n reals ...]} in mask order. Tables whose
// entries are all exactly +-1 load as boolean, everything else as general.
CubeFunction function_from_json(const std::string& text);
std::string function_to_json(const CubeFunction& f);
CubeFunction load_function_file(const std::string& path);

}  // namespace bfa
