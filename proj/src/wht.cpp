#include "bfa/wht.hpp"

#include <bit>
#include <cmath>

namespace bfa {

FourierExpansion wht_forward(const CubeFunction& f) {
  const int n = f.dim();
  std::vector<double> a = f.values();
  const std::uint32_t size = f.size();
  for (int b = 0; b < n; ++b) {
    const std::uint32_t bit = std::uint32_t{1} << b;
    for (std::uint32_t m = 0; m < size; ++m) {
      if (m & bit) continue;
      const double lo = a[m];       // coordinate b = -1
      const double hi = a[m | bit]; // coordinate b = +1
      a[m] = lo + hi;
      a[m | bit] = hi - lo;
    }
  }
  const double scale = std::ldexp(1.0, -n);  // exact power of two
  for (double& v : a) v *= scale;
  return FourierExpansion{n, std::move(a)};
}

CubeFunction wht_inverse(const FourierExpansion& e, ValueKind kind) {
  const int n = e.n;
  std::vector<double> a = e.coeffs;
  const std::uint32_t size = e.size();
  for (int b = 0; b < n; ++b) {
    const std::uint32_t bit = std::uint32_t{1} << b;
    for (std::uint32_t m = 0; m < size; ++m) {
      if (m & bit) continue;
      const double c0 = a[m];       // subset without b
      const double c1 = a[m | bit]; // subset with b
      a[m] = c0 - c1;
      a[m | bit] = c0 + c1;
    }
  }
  return CubeFunction(n, std::move(a), kind);
}

LevelWeights level_weights(const FourierExpansion& e) {
  LevelWeights lw;
  lw.n = e.n;
  lw.w.assign(e.n + 1, 0.0);
  for (std::uint32_t s = 0; s < e.size(); ++s)
    lw.w[std::popcount(s)] += e.coeffs[s] * e.coeffs[s];
  return lw;
}

double LevelWeights::total() const {
  double sum = 0.0;
  for (double v : w) sum += v;
  return sum;
}

double LevelWeights::curve(double t) const {
  double sum = 0.0;
  const double t2 = t * t;
  double pow = 1.0;
  for (double v : w) {
    sum += v * pow;
    pow *= t2;
  }
  return sum;
}

double LevelWeights::curve_derivative(double t) const {
  // d/dt sum_k W[k] t^{2k} = sum_k 2k W[k] t^{2k-1}
  double sum = 0.0;
  const double t2 = t * t;
  double pow = t;  // t^{2k-1} at k=1
  for (std::size_t k = 1; k < w.size(); ++k) {
    sum += 2.0 * static_cast<double>(k) * w[k] * pow;
    pow *= t2;
  }
  return sum;
}

double LevelWeights::noise_form(double rho) const {
  double sum = 0.0;
  double pow = rho;
  for (std::size_t k = 1; k < w.size(); ++k) {
    sum += w[k] * pow;
    pow *= rho;
  }
  return sum;
}

double parseval_gap(const CubeFunction& f, const FourierExpansion& e) {
  double coeff_mass = 0.0;
  for (double c : e.coeffs) coeff_mass += c * c;
  double second_moment = 0.0;
  for (double v : f.values()) second_moment += v * v;
  second_moment /= static_cast<double>(f.size());
  return coeff_mass - second_moment;
}

}  // namespace bfa
