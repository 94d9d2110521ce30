#include "bfa/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfa/extension.hpp"
#include "bfa/quadrature.hpp"

namespace bfa {

namespace {

struct Event {
  double t;
  int coord;
  bool extra;  // hesitant-overlay zero rather than a base flip
};

void collect_events(const SamplePath& path, const HesitantOverlay* overlay,
                    std::vector<Event>& out) {
  out.clear();
  for (int i = 0; i < path.n; ++i)
    for (double t : path.coords[i].jump_times) out.push_back({t, i, false});
  if (overlay)
    for (int i = 0; i < path.n; ++i)
      for (double t : overlay->extra_jump_times[i]) out.push_back({t, i, true});
  std::sort(out.begin(), out.end(),
            [](const Event& a, const Event& b) { return a.t < b.t; });
}

std::uint32_t initial_negmask(const SamplePath& path) {
  std::uint32_t m = 0;
  for (int i = 0; i < path.n; ++i)
    if (path.coords[i].sign_at_truncation < 0) m |= std::uint32_t{1} << i;
  return m;
}

std::span<double> poly_row(std::vector<double>& buf, int n, int i) {
  return std::span<double>(buf.data() + static_cast<std::size_t>(i) * (n + 1),
                           n + 1);
}

void fill_point(std::span<double> x, double t, std::uint32_t negmask, int n) {
  for (int j = 0; j < n; ++j)
    x[j] = ((negmask >> j) & 1u) ? -t : t;
}

}  // namespace

double PathObservables::qv_window(double t1, double t2) const {
  double sum = 0.0;
  for (const auto& j : jumps)
    if (j.time > t1 && j.time <= t2) sum += j.jump_sq;
  return sum;
}

PathObservables path_observables(const FunctionContext& ctx,
                                 const SamplePath& path,
                                 const HesitantOverlay* overlay,
                                 const ObservableOptions& opt) {
  const int n = path.n;
  if (ctx.dim() != n) throw spec_error("path dimension does not match function");
  if (!(opt.alpha > 0.0 && opt.alpha <= 1.0))
    throw std::domain_error("alpha outside (0,1]");
  if (!(opt.p >= 0.5 && opt.p <= 1.0))
    throw std::domain_error("gradient exponent outside [1/2, 1]");

  Workspace ws;
  ctx.prepare(ws);
  PathObservables out;
  out.qv_by_coord.assign(n, 0.0);

  const double sum_sq = ctx.sum_sq_influences();
  const double log_term =
      sum_sq > 0.0 ? std::log(2.0 + std::exp(1.0) / sum_sq)
                   : std::numeric_limits<double>::infinity();
  out.gradient_stop_threshold =
      0.125 * opt.alpha * std::pow(log_term, opt.p);

  // sup over [0, truncation) closes onto the start value f(0) = E f
  out.running_max = 0.5 * (1.0 + ctx.mean());

  std::vector<Event> events;
  collect_events(path, overlay, events);
  std::uint32_t negmask = initial_negmask(path);

  const bool need_a_polys = opt.with_threshold_integral || overlay != nullptr;
  auto extract_polys = [&] {
    ctx.signed_poly(ctx.expansion(), negmask, ws.poly_f);
    if (opt.with_gradient_scan)
      for (int i = 0; i < n; ++i)
        ctx.signed_poly(ctx.derivative_expansion(i), negmask,
                        poly_row(ws.poly_d, n, i));
    if (need_a_polys)
      for (int i = 0; i < n; ++i)
        ctx.signed_poly(ctx.abs_derivative_expansion(i), negmask,
                        poly_row(ws.poly_a, n, i));
  };

  auto abs_deriv_value = [&](int coord, double t) {
    if (need_a_polys) return horner(poly_row(ws.poly_a, n, coord), t);
    ctx.signed_poly(ctx.abs_derivative_expansion(coord), negmask, ws.poly_one);
    return horner(ws.poly_one, t);
  };

  auto gradient_sq = [&](double t) {
    double g = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = horner(poly_row(ws.poly_d, n, i), t);
      g += d * d;
    }
    return g;
  };

  // Scans the current segment's polynomials over [a, b] at the grid step,
  // updating the running max, the first-positive time and the gradient
  // functional. b carries the left-limit values; the post-jump state at b
  // is scanned as the start of the next segment.
  double prev_scan_t = path.truncation;
  double prev_runmax = out.running_max;
  auto scan_point = [&](double t, bool segment_start) {
    const double fv = horner(ws.poly_f, t);
    if (!out.first_positive_found && fv > 0.0) {
      out.first_positive_found = true;
      if (segment_start) {
        out.first_positive_time = t;
        out.first_positive_at_truncation = t == path.truncation;
      } else {
        out.first_positive_time = bisect(
            [&](double u) { return horner(ws.poly_f, u); }, prev_scan_t, t,
            opt.crossing_tol);
      }
    }
    prev_runmax = out.running_max;
    out.running_max = std::max(out.running_max, 0.5 * (1.0 + fv));
    if (opt.with_gradient_scan) {
      const double psi = std::pow(gradient_sq(t), opt.p) * out.running_max;
      out.psi_max = std::max(out.psi_max, psi);
      if (!out.gradient_stopped && psi > out.gradient_stop_threshold) {
        out.gradient_stopped = true;
        if (segment_start) {
          out.gradient_stop_time = t;
        } else {
          const double snap_max = prev_runmax;
          out.gradient_stop_time = bisect(
              [&](double u) {
                const double m =
                    std::max(snap_max, 0.5 * (1.0 + horner(ws.poly_f, u)));
                return std::pow(gradient_sq(u), opt.p) * m -
                       out.gradient_stop_threshold;
              },
              prev_scan_t, t, opt.crossing_tol);
        }
      }
    }
    prev_scan_t = t;
  };

  auto scan_segment = [&](double a, double b) {
    scan_point(a, true);
    const double step = opt.grid_step;
    for (double t = (std::floor(a / step) + 1.0) * step; t < b; t += step)
      scan_point(t, false);
    if (b > a) scan_point(b, false);
  };

  // Integrates 2 t A_i(t)^2 over the sub-intervals of [a, b] where the
  // influence extension A_i stays below alpha, subdividing at crossings.
  auto threshold_integral_segment = [&](double a, double b) {
    if (!(b > a)) return;
    for (int i = 0; i < n; ++i) {
      auto poly = poly_row(ws.poly_a, n, i);
      std::vector<double> cuts;
      cuts.push_back(a);
      double prev = a;
      double prev_v = horner(poly, a) - opt.alpha;
      const double step = opt.grid_step;
      auto visit = [&](double t) {
        const double v = horner(poly, t) - opt.alpha;
        if ((prev_v < 0.0) != (v < 0.0))
          cuts.push_back(bisect(
              [&](double u) { return horner(poly, u) - opt.alpha; }, prev, t,
              opt.crossing_tol));
        prev = t;
        prev_v = v;
      };
      for (double t = (std::floor(a / step) + 1.0) * step; t < b; t += step)
        visit(t);
      visit(b);
      cuts.push_back(b);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        if (!(hi > lo)) continue;
        if (horner(poly, 0.5 * (lo + hi)) >= opt.alpha) continue;
        out.integral_below_alpha += integrate_capped(
            [&](double t) {
              const double v = horner(poly, t);
              return 2.0 * t * v * v;
            },
            lo, hi, 1.0 / 16.0);
      }
    }
  };

  extract_polys();
  double seg_start = path.truncation;
  std::size_t idx = 0;
  while (true) {
    std::size_t base = idx;
    while (base < events.size() && events[base].extra) ++base;
    const double seg_end = base < events.size() ? events[base].t : 1.0;

    scan_segment(seg_start, seg_end);
    if (opt.with_threshold_integral)
      threshold_integral_segment(seg_start, seg_end);

    // hesitant zeros strictly inside the segment, in time order
    for (std::size_t k = idx; k < base; ++k) {
      if (out.hesitant_hit) break;
      if (abs_deriv_value(events[k].coord, events[k].t) >= opt.alpha) {
        out.hesitant_hit = true;
        out.hesitant_hit_time = events[k].t;
      }
    }

    if (base == events.size()) break;

    const Event& ev = events[base];
    double dval;
    if (opt.with_gradient_scan) {
      dval = horner(poly_row(ws.poly_d, n, ev.coord), ev.t);
    } else {
      ctx.signed_poly(ctx.derivative_expansion(ev.coord), negmask, ws.poly_one);
      dval = horner(ws.poly_one, ev.t);
    }
    const double jump = 2.0 * ev.t * dval;
    const double jump_sq = jump * jump;
    out.quadratic_variation += jump_sq;
    out.qv_by_coord[ev.coord] += jump_sq;
    out.jumps.push_back({ev.t, ev.coord, jump_sq});

    const double aval = abs_deriv_value(ev.coord, ev.t);
    if (aval < opt.alpha)
      out.qv_below_alpha += jump_sq;
    else
      out.large_derivative_jump = true;
    // the hesitant process sits at zero at base flips as well
    if (overlay && !out.hesitant_hit && aval >= opt.alpha) {
      out.hesitant_hit = true;
      out.hesitant_hit_time = ev.t;
    }

    negmask ^= std::uint32_t{1} << ev.coord;
    seg_start = ev.t;
    extract_polys();
    idx = base + 1;
  }

  const std::uint32_t end_mask = ~negmask & (ctx.function().size() - 1u);
  out.end_value = ctx.function()[end_mask];
  double grad_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = ctx.derivative_table(i)[end_mask];
    grad_sq += d * d;
  }
  out.end_gradient_sq = grad_sq;
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimators. Per-path streams are derived from (seed, index),
// partials accumulate per fixed-size chunk and reduce in chunk order, so
// results do not depend on the worker count.

MCEstimate mc_variance_via_qv(const CubeFunction& f, std::uint64_t n_paths,
                              double eps, std::uint64_t seed, int workers) {
  if (n_paths < 100) throw spec_error("variance estimator needs >= 100 paths");
  FunctionContext ctx(f);
  const double correction = ctx.qv_correction(eps);
  const int n = f.dim();

  auto parts = run_path_chunks<MeanAcc>(
      n_paths, default_chunk_size, workers,
      [&](std::uint64_t begin, std::uint64_t end) {
        MeanAcc acc;
        Workspace ws;
        ctx.prepare(ws);
        std::vector<Event> events;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          SamplePath path = sample_path_indexed(n, eps, seed, idx);
          collect_events(path, nullptr, events);
          std::uint32_t negmask = initial_negmask(path);
          double qv = 0.0;
          for (const Event& ev : events) {
            negmask ^= std::uint32_t{1} << ev.coord;
            fill_point(ws.point, ev.t, negmask, n);
            const double d = detail::fold_eval(ctx.derivative_table(ev.coord),
                                               ws.point, ws.fold);
            qv += 4.0 * ev.t * ev.t * d * d;
          }
          acc.add(qv);
        }
        return acc;
      });

  MeanAcc total;
  for (const auto& p : parts) total.merge(p);
  return total.estimate(seed, correction);
}

JumpIntegralCheck mc_jump_integral_check(const CubeFunction& f, JumpTestFn g,
                                         int coord, double t1, double t2,
                                         std::uint64_t n_paths, double eps,
                                         std::uint64_t seed, int workers) {
  if (!(t1 >= 0.0 && t1 < t2 && t2 <= 1.0))
    throw spec_error("malformed jump-integral interval");
  if (coord < 0 || coord >= f.dim()) throw spec_error("coordinate out of range");
  FunctionContext ctx(f);
  const int n = f.dim();

  const LevelWeights one{0, {1.0}};
  const LevelWeights& lw = g == JumpTestFn::one ? one
                           : g == JumpTestFn::derivative_sq
                               ? ctx.derivative_levels(coord)
                               : ctx.abs_derivative_levels(coord);

  JumpIntegralCheck out;
  out.rhs = FunctionContext::weighted_time_integral(lw, t1, t2);
  // jumps below the truncation are unobservable; add their expected
  // contribution in closed form
  const double mc_start = std::max(t1, eps);
  const double stub_end = std::min(mc_start, t2);
  const double stub =
      t1 < stub_end ? FunctionContext::weighted_time_integral(lw, t1, stub_end)
                    : 0.0;

  auto parts = run_path_chunks<MeanAcc>(
      n_paths, default_chunk_size, workers,
      [&](std::uint64_t begin, std::uint64_t end) {
        MeanAcc acc;
        Workspace ws;
        ctx.prepare(ws);
        std::vector<Event> events;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          SamplePath path = sample_path_indexed(n, eps, seed, idx);
          collect_events(path, nullptr, events);
          std::uint32_t negmask = initial_negmask(path);
          double sum = 0.0;
          for (const Event& ev : events) {
            negmask ^= std::uint32_t{1} << ev.coord;
            if (ev.coord != coord || ev.t < mc_start || ev.t > t2) continue;
            double gval = 1.0;
            if (g != JumpTestFn::one) {
              fill_point(ws.point, ev.t, negmask, n);
              const auto& table = g == JumpTestFn::derivative_sq
                                      ? ctx.derivative_table(coord)
                                      : ctx.abs_derivative_table(coord);
              const double v = detail::fold_eval(table, ws.point, ws.fold);
              gval = v * v;
            }
            sum += 4.0 * ev.t * ev.t * gval;
          }
          acc.add(sum);
        }
        return acc;
      });

  MeanAcc total;
  for (const auto& p : parts) total.merge(p);
  out.lhs = total.estimate(seed, stub);
  return out;
}

double path_running_max(const FunctionContext& ctx, const SamplePath& path,
                        Workspace& ws, double grid_step) {
  const int n = path.n;
  double runmax = 0.5 * (1.0 + ctx.mean());
  std::vector<Event> events;
  collect_events(path, nullptr, events);
  std::uint32_t negmask = initial_negmask(path);
  double seg_start = path.truncation;
  std::size_t idx = 0;
  while (true) {
    ctx.signed_poly(ctx.expansion(), negmask, ws.poly_f);
    const double seg_end = idx < events.size() ? events[idx].t : 1.0;
    auto look = [&](double t) {
      runmax = std::max(runmax, 0.5 * (1.0 + horner(ws.poly_f, t)));
    };
    look(seg_start);
    for (double t = (std::floor(seg_start / grid_step) + 1.0) * grid_step;
         t < seg_end; t += grid_step)
      look(t);
    look(seg_end);
    if (idx == events.size()) break;
    negmask ^= std::uint32_t{1} << events[idx].coord;
    seg_start = seg_end;
    ++idx;
  }
  return runmax;
}

namespace {

struct Bucket {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
};

}  // namespace

GfEstimate estimate_gf(const CubeFunction& f, std::uint64_t n_paths,
                       double eps, std::uint64_t seed, int workers) {
  const int n = f.dim();
  if (n > 12) throw capacity_error("endpoint bucketing limited to n <= 12");
  if (n_paths < 100ull << n)
    throw spec_error("conditional estimate needs at least 100 * 2^n paths");
  FunctionContext ctx(f);
  const std::uint32_t n_buckets = std::uint32_t{1} << n;

  using Partial = std::vector<Bucket>;
  auto parts = run_path_chunks<Partial>(
      n_paths, default_chunk_size, workers,
      [&](std::uint64_t begin, std::uint64_t end) {
        Partial buckets(n_buckets);
        Workspace ws;
        ctx.prepare(ws);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          SamplePath path = sample_path_indexed(n, eps, seed, idx);
          const double sup = path_running_max(ctx, path, ws);
          Bucket& b = buckets[endpoint_mask(path)];
          b.sum += sup;
          b.sum_sq += sup * sup;
          ++b.n;
        }
        return buckets;
      });

  std::vector<Bucket> total(n_buckets);
  for (const auto& part : parts)
    for (std::uint32_t m = 0; m < n_buckets; ++m) {
      total[m].sum += part[m].sum;
      total[m].sum_sq += part[m].sum_sq;
      total[m].n += part[m].n;
    }

  GfEstimate out;
  out.n = n;
  out.n_samples = n_paths;
  out.seed = seed;
  out.mean.assign(n_buckets, 0.0);
  out.std_error.assign(n_buckets, 0.0);
  out.count.assign(n_buckets, 0);
  out.low_confidence.assign(n_buckets, false);
  for (std::uint32_t m = 0; m < n_buckets; ++m) {
    const Bucket& b = total[m];
    out.count[m] = b.n;
    out.low_confidence[m] = b.n < 30;
    if (b.n == 0) continue;
    out.mean[m] = b.sum / static_cast<double>(b.n);
    if (b.n >= 2) {
      const double var = (b.sum_sq - b.sum * b.sum / static_cast<double>(b.n)) /
                         static_cast<double>(b.n - 1);
      out.std_error[m] = std::sqrt(std::max(0.0, var) / static_cast<double>(b.n));
    }
  }
  return out;
}

double GfEstimate::second_moment() const {
  double sum = 0.0;
  for (double m : mean) sum += m * m;
  return sum / static_cast<double>(mean.size());
}

double GfEstimate::second_moment_se() const {
  const double inv = 1.0 / static_cast<double>(mean.size());
  double var = 0.0;
  for (std::size_t m = 0; m < mean.size(); ++m) {
    const double d = 2.0 * mean[m] * std_error[m] * inv;
    var += d * d;
  }
  return std::sqrt(var);
}

std::vector<BoundaryBound> estimate_boundary_bound_multi(
    const CubeFunction& f, const std::vector<double>& alphas,
    std::uint64_t n_paths, double eps, std::uint64_t seed, int workers) {
  for (double a : alphas)
    if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("alpha outside (0,1]");
  FunctionContext ctx(f);
  const int n = f.dim();
  SensitivityProfile prof = sensitivity_profile(f);

  using Partial = std::vector<std::uint64_t>;  // hit counts per alpha
  auto parts = run_path_chunks<Partial>(
      n_paths, default_chunk_size, workers,
      [&](std::uint64_t begin, std::uint64_t end) {
        Partial hits(alphas.size(), 0);
        Workspace ws;
        ctx.prepare(ws);
        std::vector<Event> events;
        std::vector<char> hit(alphas.size());
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          SamplePath path = sample_path_indexed(n, eps, seed, idx);
          collect_events(path, nullptr, events);
          std::uint32_t negmask = initial_negmask(path);
          std::fill(hit.begin(), hit.end(), 0);
          for (const Event& ev : events) {
            negmask ^= std::uint32_t{1} << ev.coord;
            fill_point(ws.point, ev.t, negmask, n);
            const double a = detail::fold_eval(
                ctx.abs_derivative_table(ev.coord), ws.point, ws.fold);
            for (std::size_t k = 0; k < alphas.size(); ++k)
              if (a >= alphas[k]) hit[k] = 1;
          }
          for (std::size_t k = 0; k < alphas.size(); ++k)
            if (hit[k]) ++hits[k];
        }
        return hits;
      });

  std::vector<std::uint64_t> hits(alphas.size(), 0);
  for (const auto& part : parts)
    for (std::size_t k = 0; k < alphas.size(); ++k) hits[k] += part[k];

  std::vector<BoundaryBound> out;
  out.reserve(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    BoundaryBound b;
    b.alpha = alphas[k];
    const double p_hat =
        static_cast<double>(hits[k]) / static_cast<double>(n_paths);
    b.p_large_jump.mean = p_hat;
    b.p_large_jump.std_error =
        std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) /
                  static_cast<double>(n_paths));
    b.p_large_jump.n_samples = n_paths;
    b.p_large_jump.seed = seed;
    b.inner_mass = prof.inner_boundary_mass;
    b.outer_mass = prof.outer_boundary_mass;
    out.push_back(b);
  }
  return out;
}

BoundaryBound estimate_boundary_bound(const CubeFunction& f, double alpha,
                                      std::uint64_t n_paths, double eps,
                                      std::uint64_t seed, int workers) {
  return estimate_boundary_bound_multi(f, {alpha}, n_paths, eps, seed,
                                       workers)[0];
}

std::vector<TracePoint> trace_path(const FunctionContext& ctx,
                                   const SamplePath& path, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw spec_error("grid step outside (0,1]");
  Workspace ws;
  ctx.prepare(ws);
  std::vector<Event> events;
  collect_events(path, nullptr, events);
  std::uint32_t negmask = initial_negmask(path);

  std::vector<TracePoint> out;
  double seg_start = path.truncation;
  std::size_t idx = 0;
  while (true) {
    ctx.signed_poly(ctx.expansion(), negmask, ws.poly_f);
    const double seg_end = idx < events.size() ? events[idx].t : 1.0;
    out.push_back({seg_start, horner(ws.poly_f, seg_start),
                   seg_start != path.truncation});
    for (double t = (std::floor(seg_start / grid_step) + 1.0) * grid_step;
         t < seg_end; t += grid_step)
      out.push_back({t, horner(ws.poly_f, t), false});
    if (idx == events.size()) {
      out.push_back({1.0, horner(ws.poly_f, 1.0), false});
      break;
    }
    negmask ^= std::uint32_t{1} << events[idx].coord;
    seg_start = seg_end;
    ++idx;
  }
  return out;
}

}  // namespace bfa
