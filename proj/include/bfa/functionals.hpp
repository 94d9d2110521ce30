#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bfa/context.hpp"
#include "bfa/mc.hpp"
#include "bfa/path.hpp"

namespace bfa {

struct JumpRecord {
  double time = 0.0;
  int coord = 0;
  double jump_sq = 0.0;  // (2t d_i f_t)^2
};

struct ObservableOptions {
  double alpha = 0.5;  // threshold on the influence extension
  double p = 0.5;      // gradient exponent, in [1/2, 1]
  bool with_threshold_integral = true;  // per-coordinate truncated integral
  bool with_gradient_scan = true;       // gradient process, stopping time
  double grid_step = 1.0 / 1024.0;
  double crossing_tol = 1e-10;
};

struct PathObservables {
  double quadratic_variation = 0.0;
  std::vector<double> qv_by_coord;
  // quadratic variation kept when the influence extension sits below alpha
  double qv_below_alpha = 0.0;
  // 2 sum_i int t (f^(i)_t)^2 1{f^(i)_t < alpha} dt over the realized window
  double integral_below_alpha = 0.0;
  // some coordinate jumped while its influence extension was >= alpha
  bool large_derivative_jump = false;
  double running_max = 0.0;             // sup_s (1 + f_s)/2
  double first_positive_time = 1.0;     // first t with f_t > 0, else 1
  bool first_positive_found = false;
  bool first_positive_at_truncation = false;
  double gradient_stop_time = 1.0;      // first t the gradient functional
  bool gradient_stopped = false;        //   exceeds its threshold, else 1
  double gradient_stop_threshold = 0.0;
  double psi_max = 0.0;                 // max of the gradient functional seen
  double end_value = 0.0;
  double end_gradient_sq = 0.0;
  // first hesitant-zero time whose coordinate had influence extension >=
  // alpha (only when an overlay is supplied)
  double hesitant_hit_time = 1.0;
  bool hesitant_hit = false;
  std::vector<JumpRecord> jumps;

  // quadratic variation gained on (t1, t2]
  double qv_window(double t1, double t2) const;
};

PathObservables path_observables(const FunctionContext& ctx,
                                 const SamplePath& path,
                                 const HesitantOverlay* overlay,
                                 const ObservableOptions& opt = {});

// Mean realized quadratic variation plus the analytic sub-truncation stub;
// an unbiased estimator of Var(f).
MCEstimate mc_variance_via_qv(const CubeFunction& f, std::uint64_t n_paths,
                              double eps, std::uint64_t seed, int workers = 1);

enum class JumpTestFn {
  one,            // g = 1
  derivative_sq,  // g = (d_i f_t)^2
  influence_sq,   // g = (f^(i)_t)^2
};

struct JumpIntegralCheck {
  MCEstimate lhs;  // E sum_{t in J_i, window} 4 t^2 g_t, plus analytic stub
  double rhs = 0.0;  // 2 int t E g_t dt, closed form
};

JumpIntegralCheck mc_jump_integral_check(const CubeFunction& f, JumpTestFn g,
                                         int coord, double t1, double t2,
                                         std::uint64_t n_paths, double eps,
                                         std::uint64_t seed, int workers = 1);

// Conditional mean of sup_s (1+f_s)/2 given the endpoint vertex.
struct GfEstimate {
  int n = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean;       // per endpoint mask
  std::vector<double> std_error;  // per endpoint mask
  std::vector<std::uint64_t> count;
  std::vector<bool> low_confidence;  // fewer than 30 samples

  double second_moment() const;     // E over uniform endpoints of mean^2
  double second_moment_se() const;  // first-order propagated
};

GfEstimate estimate_gf(const CubeFunction& f, std::uint64_t n_paths,
                       double eps, std::uint64_t seed, int workers = 1);

// Probability that some coordinate jumps while its influence extension is
// at least alpha, against the exact one-sided vertex boundary masses.
struct BoundaryBound {
  double alpha = 0.0;
  MCEstimate p_large_jump;
  double inner_mass = 0.0;
  double outer_mass = 0.0;

  double bound() const { return 0.5 * alpha * p_large_jump.mean; }
  double margin() const {
    return std::min(inner_mass, outer_mass) - bound();
  }
};

BoundaryBound estimate_boundary_bound(const CubeFunction& f, double alpha,
                                      std::uint64_t n_paths, double eps,
                                      std::uint64_t seed, int workers = 1);
std::vector<BoundaryBound> estimate_boundary_bound_multi(
    const CubeFunction& f, const std::vector<double>& alphas,
    std::uint64_t n_paths, double eps, std::uint64_t seed, int workers = 1);

// f_t sampled on a time grid plus its jump times; rows ordered by time.
struct TracePoint {
  double t = 0.0;
  double value = 0.0;
  bool is_jump = false;
};

std::vector<TracePoint> trace_path(const FunctionContext& ctx,
                                   const SamplePath& path, double grid_step);

// sup over [truncation, 1] of (1 + f_t)/2, grid-scanned per segment, with
// the t -> 0 limit (1 + E f)/2 included.
double path_running_max(const FunctionContext& ctx, const SamplePath& path,
                        Workspace& ws, double grid_step = 1.0 / 1024.0);

}  // namespace bfa
