#pragma once

#include <cstdint>
#include <vector>

#include "bfa/cube_function.hpp"

namespace bfa {

// Coefficient table indexed by subset mask: bit i set <=> coordinate i in S.
struct FourierExpansion {
  int n = 0;
  std::vector<double> coeffs;

  std::uint32_t size() const { return std::uint32_t{1} << n; }
  double coeff(std::uint32_t subset) const { return coeffs[subset]; }
};

// coeffs[S] = 2^{-n} sum_y f(y) prod_{i in S} y_i. Exact butterfly; the
// inverse reproduces integer-valued +-1 tables bit for bit.
FourierExpansion wht_forward(const CubeFunction& f);
CubeFunction wht_inverse(const FourierExpansion& e,
                         ValueKind kind = ValueKind::general);

// W[k] = sum_{|S|=k} coeff[S]^2.
struct LevelWeights {
  int n = 0;
  std::vector<double> w;  // length n+1

  double total() const;
  // sum_k W[k] t^{2k}  (the second moment of the coefficient process at
  // time t; subtract w[0] for the centered version).
  double curve(double t) const;
  double curve_derivative(double t) const;
  // sum_{k>=1} W[k] rho^k  (noise form).
  double noise_form(double rho) const;
};

LevelWeights level_weights(const FourierExpansion& e);

// Parseval residual: sum_S coeff^2 - E[f^2]. Used by validity checks.
double parseval_gap(const CubeFunction& f, const FourierExpansion& e);

}  // namespace bfa
