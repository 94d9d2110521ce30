#include "bfa/spectral.hpp"

#include <bit>
#include <cmath>

namespace bfa {

namespace {

void require_boolean(const CubeFunction& f) {
  if (f.kind() != ValueKind::boolean)
    throw spec_error("operation requires a boolean (+-1) function");
}

void require_time(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("time parameter outside [0,1]");
}

}  // namespace

SpectralStats spectral_stats(const CubeFunction& f) {
  require_boolean(f);
  const int n = f.dim();
  const double inv = 1.0 / static_cast<double>(f.size());
  SpectralStats s;
  for (double v : f.values()) s.mean += v;
  s.mean *= inv;
  s.variance = 1.0 - s.mean * s.mean;  // E f^2 = 1 for boolean f
  s.influences.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    std::uint32_t disagree = 0;
    for (std::uint32_t m = 0; m < f.size(); ++m) {
      if (m & bit) continue;
      if (f[m] != f[m | bit]) disagree += 2;
    }
    s.influences[i] = static_cast<double>(disagree) * inv;
    s.total_influence += s.influences[i];
    s.sum_sq_influences += s.influences[i] * s.influences[i];
  }
  s.monotone = is_monotone(f);
  return s;
}

SensitivityProfile sensitivity_profile(const CubeFunction& f) {
  require_boolean(f);
  const int n = f.dim();
  const double inv = 1.0 / static_cast<double>(f.size());
  SensitivityProfile p;
  p.sensitivity.assign(f.size(), 0);
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    int h = 0;
    for (int i = 0; i < n; ++i)
      if (f[m] != f[m ^ (std::uint32_t{1} << i)]) ++h;
    p.sensitivity[m] = h;
    if (h > 0) {
      p.boundary_mass += inv;
      if (f[m] > 0)
        p.inner_boundary_mass += inv;
      else
        p.outer_boundary_mass += inv;
      p.mean_sqrt += std::sqrt(static_cast<double>(h)) * inv;
    }
  }
  return p;
}

double SensitivityProfile::moment(double p) const {
  if (!(p > 0.0)) throw std::domain_error("sensitivity moment needs p > 0");
  double sum = 0.0;
  for (int h : sensitivity)
    if (h > 0) sum += std::pow(static_cast<double>(h), p);
  return sum / static_cast<double>(sensitivity.size());
}

double noise_stability(const CubeFunction& f, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::domain_error("noise parameter outside [0,1]");
  LevelWeights lw = level_weights(wht_forward(f));
  return lw.noise_form(1.0 - eps);
}

double time_variance(const CubeFunction& f, double t) {
  require_time(t);
  LevelWeights lw = level_weights(wht_forward(f));
  return lw.curve(t) - lw.w[0];
}

double r_value(const CubeFunction& f, double t) {
  require_time(t);
  double sum = 0.0;
  for (int i = 0; i < f.dim(); ++i) {
    LevelWeights lw = level_weights(wht_forward(derivative(f, i)));
    sum += lw.curve(t);
  }
  return sum;
}

double psi_value(const CubeFunction& f, int coord, double t) {
  require_time(t);
  LevelWeights lw = level_weights(wht_forward(abs_derivative(f, coord)));
  return lw.curve(t);
}

}  // namespace bfa
