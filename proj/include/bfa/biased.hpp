#pragma once

#include <cstdint>
#include <vector>

#include "bfa/cube_function.hpp"

namespace bfa {

// Per-coordinate success probabilities of a two-point product measure;
// every entry must lie strictly inside (0,1).
struct BiasedBasisParams {
  std::vector<double> p;
};

// Coefficients against the orthonormal basis of the biased measure,
// indexed by subset mask like FourierExpansion.
struct BiasedExpansion {
  int n = 0;
  BiasedBasisParams params;
  std::vector<double> coeffs;

  std::uint32_t size() const { return std::uint32_t{1} << n; }
  double coeff(std::uint32_t subset) const { return coeffs[subset]; }
};

BiasedExpansion biased_transform(const CubeFunction& f,
                                 const BiasedBasisParams& params);

// Reconstruction; round-trips biased_transform up to rounding.
CubeFunction biased_inverse(const BiasedExpansion& e,
                            ValueKind kind = ValueKind::general);

// 4 p_i (1-p_i) * P_mu[f(y) != f(y with coordinate i flipped)].
double biased_influence(const CubeFunction& f, const BiasedBasisParams& params,
                        int coord);

// Both routes to the same quantity: lhs is the iterated discrete derivative
// over the subset evaluated at x = 2p - 1; rhs rescales the biased
// coefficient by prod_{i in S} 1/sqrt(1 - x_i^2).
struct DerivativeIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
};

DerivativeIdentity biased_derivative_identity(const CubeFunction& f,
                                              const BiasedBasisParams& params,
                                              std::uint32_t subset);

}  // namespace bfa
