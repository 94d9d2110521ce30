#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bfa/cube_function.hpp"
#include "bfa/spectral.hpp"
#include "bfa/wht.hpp"

namespace bfa {

// Reusable per-thread buffers for evaluation along paths.
struct Workspace {
  std::vector<double> fold;
  std::vector<double> point;
  std::vector<double> poly_f;
  std::vector<double> poly_one;
  std::vector<double> poly_d;  // n polynomials, flattened rows of n+1
  std::vector<double> poly_a;
};

// A boolean function bundled with everything the path functionals query:
// its expansion, derivative and |derivative| tables, their expansions and
// level weights. Derivative machinery is capped at dimension 20 (tables
// alone are 2n * 2^n doubles).
class FunctionContext {
 public:
  static constexpr int max_derivative_dim = 20;

  explicit FunctionContext(CubeFunction f);

  const CubeFunction& function() const { return f_; }
  int dim() const { return f_.dim(); }
  const FourierExpansion& expansion() const { return fhat_; }
  const LevelWeights& levels() const { return levels_; }
  const SpectralStats& stats() const { return stats_; }

  double mean() const { return stats_.mean; }
  double variance() const { return stats_.variance; }
  double sum_sq_influences() const { return stats_.sum_sq_influences; }

  const std::vector<double>& derivative_table(int i) const;
  const std::vector<double>& abs_derivative_table(int i) const;
  const FourierExpansion& derivative_expansion(int i) const;
  const FourierExpansion& abs_derivative_expansion(int i) const;
  const LevelWeights& derivative_levels(int i) const;
  const LevelWeights& abs_derivative_levels(int i) const;

  double value_at(std::span<const double> x, Workspace& ws) const;
  double derivative_at(int i, std::span<const double> x, Workspace& ws) const;
  double abs_derivative_at(int i, std::span<const double> x,
                           Workspace& ws) const;

  // Exact curves from level weights.
  double time_variance(double t) const;
  double psi(int i, double t) const;         // second moment of |d_i f| process
  double gradient_moment(double t) const;    // sum_i E (d_i f)^2 at time t
  double noise_stability(double eps) const;

  // 2 sum_i int_0^eps t E(d_i f_t)^2 dt: the analytic stub below the path
  // truncation; bounded by n * eps^2 * max_i Inf_i.
  double qv_correction(double eps) const;

  // 2 int_{t1}^{t2} t * curve(t) dt for a level-weight curve.
  static double weighted_time_integral(const LevelWeights& lw, double t1,
                                       double t2);

  // Coefficients (by degree) of t -> h(t * signs) for an expansion h, where
  // bit i of negmask set means coordinate i is negative.
  void signed_poly(const FourierExpansion& e, std::uint32_t negmask,
                   std::span<double> out) const;

  void prepare(Workspace& ws) const;

 private:
  // Derivative data is built eagerly (dimension permitting) so a fully
  // constructed context is immutable and safe to share across workers.
  CubeFunction f_;
  FourierExpansion fhat_;
  LevelWeights levels_;
  SpectralStats stats_;

  struct DerivativeData {
    std::vector<std::vector<double>> deriv_tables, absderiv_tables;
    std::vector<FourierExpansion> deriv_hat, absderiv_hat;
    std::vector<LevelWeights> deriv_levels, absderiv_levels;
  };
  std::shared_ptr<const DerivativeData> deriv_;

  const DerivativeData& deriv() const;
};

double horner(std::span<const double> coeffs, double t);

}  // namespace bfa
