#include "bfa/biased.hpp"

#include <cmath>

#include "bfa/extension.hpp"

namespace bfa {

namespace {

void check_params(const BiasedBasisParams& params, int n) {
  if (static_cast<int>(params.p.size()) != n)
    throw spec_error("bias vector length does not match dimension");
  for (double pi : params.p)
    if (!(pi > 0.0 && pi < 1.0))
      throw std::domain_error("degenerate bias: p must lie strictly in (0,1)");
}

}  // namespace

BiasedExpansion biased_transform(const CubeFunction& f,
                                 const BiasedBasisParams& params) {
  const int n = f.dim();
  check_params(params, n);
  std::vector<double> a = f.values();
  const std::uint32_t size = f.size();
  for (int b = 0; b < n; ++b) {
    const double p = params.p[b];
    const double s = std::sqrt(p * (1.0 - p));
    const std::uint32_t bit = std::uint32_t{1} << b;
    for (std::uint32_t m = 0; m < size; ++m) {
      if (m & bit) continue;
      const double lo = a[m];       // coordinate b = -1, weight 1-p
      const double hi = a[m | bit]; // coordinate b = +1, weight p
      a[m] = (1.0 - p) * lo + p * hi;
      a[m | bit] = s * (hi - lo);
    }
  }
  return BiasedExpansion{n, params, std::move(a)};
}

CubeFunction biased_inverse(const BiasedExpansion& e, ValueKind kind) {
  const int n = e.n;
  std::vector<double> a = e.coeffs;
  const std::uint32_t size = e.size();
  for (int b = 0; b < n; ++b) {
    const double p = e.params.p[b];
    const double s = std::sqrt(p * (1.0 - p));
    const std::uint32_t bit = std::uint32_t{1} << b;
    for (std::uint32_t m = 0; m < size; ++m) {
      if (m & bit) continue;
      const double c0 = a[m];
      const double c1 = a[m | bit];
      a[m] = c0 - c1 * p / s;
      a[m | bit] = c0 + c1 * (1.0 - p) / s;
    }
  }
  return CubeFunction(n, std::move(a), kind);
}

double biased_influence(const CubeFunction& f, const BiasedBasisParams& params,
                        int coord) {
  const int n = f.dim();
  check_params(params, n);
  if (coord < 0 || coord >= n) throw spec_error("coordinate out of range");
  const std::uint32_t bit = std::uint32_t{1} << coord;
  double disagree_mass = 0.0;
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    if (f[m] == f[m ^ bit]) continue;
    double w = 1.0;
    for (int i = 0; i < n; ++i)
      w *= (m >> i) & 1u ? params.p[i] : 1.0 - params.p[i];
    disagree_mass += w;
  }
  const double pi = params.p[coord];
  return 4.0 * pi * (1.0 - pi) * disagree_mass;
}

DerivativeIdentity biased_derivative_identity(const CubeFunction& f,
                                              const BiasedBasisParams& params,
                                              std::uint32_t subset) {
  const int n = f.dim();
  check_params(params, n);
  if (subset >= f.size()) throw spec_error("subset mask out of range");

  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = 2.0 * params.p[i] - 1.0;

  CubeFunction d = f;
  double factor = 1.0;
  for (int i = 0; i < n; ++i) {
    if (!(subset & (std::uint32_t{1} << i))) continue;
    d = derivative(d, i);
    factor /= std::sqrt(1.0 - x[i] * x[i]);
  }
  DerivativeIdentity out;
  out.lhs = eval_extension(d, x);
  out.rhs = factor * biased_transform(f, params).coeff(subset);
  return out;
}

}  // namespace bfa
