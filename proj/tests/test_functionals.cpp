#include "doctest.h"

#include "bfa/functionals.hpp"

#include <cmath>

#include "bfa/families.hpp"
#include "bfa/quadrature.hpp"
#include "test_util.hpp"

using namespace bfa;

namespace {

SamplePath manual_path(int n, double eps,
                       const std::vector<std::pair<int, std::vector<double>>>&
                           jumps_by_coord,
                       const std::vector<int>& signs) {
  SamplePath p;
  p.n = n;
  p.truncation = eps;
  p.coords.resize(n);
  for (int i = 0; i < n; ++i) {
    p.coords[i].truncation = eps;
    p.coords[i].sign_at_truncation = signs[i];
  }
  for (const auto& [coord, times] : jumps_by_coord)
    p.coords[coord].jump_times = times;
  return p;
}

}  // namespace

TEST_CASE("quadratic variation of a hand-built dictator path") {
  FunctionContext ctx{make_function("dictator:1")};
  SamplePath p = manual_path(1, 1e-6, {{0, {0.3, 0.7}}}, {1});
  ObservableOptions opt;
  opt.alpha = 1.0;
  PathObservables obs = path_observables(ctx, p, nullptr, opt);
  CHECK(obs.quadratic_variation ==
        doctest::Approx(4.0 * (0.09 + 0.49)).epsilon(1e-14));
  CHECK(obs.qv_by_coord[0] == obs.quadratic_variation);
  CHECK(obs.jumps.size() == 2);
  CHECK(obs.qv_window(0.0, 0.5) == doctest::Approx(4.0 * 0.09));
  CHECK(obs.qv_window(0.5, 1.0) == doctest::Approx(4.0 * 0.49));
  // the derivative extension is identically 1 >= alpha at both jumps
  CHECK(obs.large_derivative_jump);
  CHECK(obs.qv_below_alpha == 0.0);
  // f_t = +t at the start: immediately positive, reported at the truncation
  CHECK(obs.first_positive_found);
  CHECK(obs.first_positive_time == doctest::Approx(1e-6));
  CHECK(obs.first_positive_at_truncation);
  CHECK(obs.end_value == 1.0);  // two flips restore the starting sign
  CHECK(obs.end_gradient_sq == 1.0);
}

TEST_CASE("first positive time via crossing") {
  // f = y1, start at -1, single flip at 0.4: f_t = -t then +t
  FunctionContext ctx{make_function("dictator:1")};
  SamplePath p = manual_path(1, 1e-6, {{0, {0.4}}}, {-1});
  PathObservables obs = path_observables(ctx, p, nullptr, {});
  CHECK(obs.first_positive_found);
  CHECK(obs.first_positive_time == doctest::Approx(0.4).epsilon(1e-9));
  CHECK_FALSE(obs.first_positive_at_truncation);
  CHECK(obs.running_max == doctest::Approx(1.0));  // ends at +1
}

TEST_CASE("threshold integral on the dictator") {
  FunctionContext ctx{make_function("dictator:1")};
  SamplePath p = manual_path(1, 1e-3, {{0, {0.5}}}, {1});
  // influence extension is identically 1: nothing below alpha = 1
  ObservableOptions opt;
  opt.alpha = 1.0;
  PathObservables obs = path_observables(ctx, p, nullptr, opt);
  CHECK(obs.integral_below_alpha == 0.0);
  CHECK(obs.qv_below_alpha == 0.0);
}

TEST_CASE("threshold integral catches crossings") {
  // majority-of-three: f^(1) extension is (1 - t^2 s2 s3)/2 on segments
  FunctionContext ctx{make_function("majority:3")};
  SamplePath p = manual_path(3, 1e-6, {}, {1, 1, 1});
  // no jumps: f^(i)(t sigma) = (1 - t^2)/2, which stays below 0.5
  ObservableOptions opt;
  opt.alpha = 0.5;
  PathObservables obs = path_observables(ctx, p, nullptr, opt);
  const double expected =
      3.0 * gauss8(
                [](double t) {
                  const double v = 0.5 * (1.0 - t * t);
                  return 2.0 * t * v * v;
                },
                1e-6, 1.0);
  CHECK(obs.integral_below_alpha == doctest::Approx(expected).epsilon(1e-6));
  CHECK(obs.quadratic_variation == 0.0);
}

TEST_CASE("variance via quadratic variation") {
  MCEstimate maj = mc_variance_via_qv(make_function("majority:3"), 20000,
                                      1e-6, 42, 1);
  CHECK(std::fabs(maj.mean - 1.0) <= 3.0 * maj.std_error);
  MCEstimate dict = mc_variance_via_qv(make_function("dictator:2"), 20000,
                                       1e-6, 7, 1);
  CHECK(std::fabs(dict.mean - 1.0) <= 3.0 * dict.std_error);
  CHECK_THROWS_AS(mc_variance_via_qv(make_function("dictator:2"), 10, 1e-6, 1, 1),
                  spec_error);
}

TEST_CASE("worker count does not change the estimate") {
  CubeFunction f = make_function("majority:3");
  MCEstimate serial = mc_variance_via_qv(f, 8000, 1e-6, 42, 1);
  MCEstimate parallel = mc_variance_via_qv(f, 8000, 1e-6, 42, 4);
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.std_error == parallel.std_error);
}

TEST_CASE("jump integral identities") {
  // g = 1 on [1/4, 1]: 2 int t dt = 1 - 1/16
  JumpIntegralCheck c1 = mc_jump_integral_check(
      make_function("dictator:1"), JumpTestFn::one, 0, 0.25, 1.0, 20000, 1e-6,
      11, 1);
  CHECK(c1.rhs == doctest::Approx(0.9375));
  CHECK(std::fabs(c1.lhs.mean - c1.rhs) <= 3.0 * c1.lhs.std_error);

  // g = (d_1 f)^2 = 1 for the dictator on [0, 1]
  JumpIntegralCheck c2 = mc_jump_integral_check(
      make_function("dictator:1"), JumpTestFn::derivative_sq, 0, 0.0, 1.0,
      20000, 1e-6, 12, 1);
  CHECK(c2.rhs == doctest::Approx(1.0));
  CHECK(std::fabs(c2.lhs.mean - c2.rhs) <= 3.0 * c2.lhs.std_error);

  // g = (f^(1))^2 for majority-of-three on [0, 1]: 2 int t (1+t^4)/4 = 1/3
  JumpIntegralCheck c3 = mc_jump_integral_check(
      make_function("majority:3"), JumpTestFn::influence_sq, 0, 0.0, 1.0,
      20000, 1e-6, 13, 1);
  CHECK(c3.rhs == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::fabs(c3.lhs.mean - c3.rhs) <= 3.0 * c3.lhs.std_error);

  CHECK_THROWS_AS(mc_jump_integral_check(make_function("dictator:1"),
                                         JumpTestFn::one, 0, 0.5, 0.25, 1000,
                                         1e-6, 1, 1),
                  spec_error);
}

TEST_CASE("sub-truncation correction stays under the coarse bound") {
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    CubeFunction f = test::random_boolean(6, 7700 + rep);
    FunctionContext ctx{f};
    double max_inf = 0.0;
    for (double inf : ctx.stats().influences) max_inf = std::max(max_inf, inf);
    for (double eps : {1e-6, 1e-3, 1e-2}) {
      CHECK(ctx.qv_correction(eps) >= 0.0);
      CHECK(ctx.qv_correction(eps) <= 6.0 * eps * eps * max_inf + 1e-18);
    }
  }
}

TEST_CASE("closed-form window integrals match quadrature") {
  FunctionContext ctx{test::random_boolean(5, 5150)};
  for (int i : {0, 3}) {
    const LevelWeights& lw = ctx.abs_derivative_levels(i);
    const double closed = FunctionContext::weighted_time_integral(lw, 0.2, 0.9);
    const double quad = integrate_panels(
        [&](double t) { return 2.0 * t * lw.curve(t); }, 0.2, 0.9, 16);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-12));
  }
}

TEST_CASE("endpoint-conditioned running max") {
  // constant +1 function: sup (1+f)/2 is identically 1
  CubeFunction one(2, {1, 1, 1, 1}, ValueKind::boolean);
  GfEstimate gf = estimate_gf(one, 500, 1e-6, 3, 1);
  for (std::uint32_t m = 0; m < 4; ++m) {
    if (gf.count[m] == 0) continue;
    CHECK(gf.mean[m] == doctest::Approx(1.0));
  }
  CHECK(gf.second_moment() == doctest::Approx(1.0));

  GfEstimate gmaj = estimate_gf(make_function("majority:3"), 2000, 1e-6, 4, 2);
  std::uint64_t total = 0;
  for (std::uint32_t m = 0; m < 8; ++m) {
    total += gmaj.count[m];
    CHECK(gmaj.mean[m] >= 0.0);
    CHECK(gmaj.mean[m] <= 1.0);
    CHECK(gmaj.low_confidence[m] == (gmaj.count[m] < 30));
  }
  CHECK(total == 2000);
  CHECK_THROWS_AS(estimate_gf(make_function("majority:3"), 100, 1e-6, 1, 1),
                  spec_error);
}

TEST_CASE("boundary bound estimates") {
  // dictator: coordinate 1 flips almost surely, influence extension is 1
  BoundaryBound b = estimate_boundary_bound(make_function("dictator:2"), 1.0,
                                            20000, 1e-9, 21, 1);
  CHECK(b.inner_mass == doctest::Approx(0.5));
  CHECK(b.outer_mass == doctest::Approx(0.5));
  CHECK(b.p_large_jump.mean > 0.99);
  CHECK(b.margin() >= -3.0 * 0.5 * b.p_large_jump.std_error);

  auto maj = estimate_boundary_bound_multi(make_function("majority:3"),
                                           {0.25, 0.5, 1.0}, 20000, 1e-6, 22, 1);
  for (const auto& bb : maj) {
    CHECK(bb.inner_mass == doctest::Approx(0.375));
    CHECK(bb.margin() >= -3.0 * 0.5 * bb.alpha * bb.p_large_jump.std_error);
  }
}

TEST_CASE("dictator trace is the signed time") {
  FunctionContext ctx{make_function("dictator:1")};
  SamplePath p = sample_path_indexed(1, 1e-6, 5, 3);
  for (const auto& row : trace_path(ctx, p, 0.01))
    CHECK(std::fabs(row.value) == doctest::Approx(row.t).epsilon(1e-14));
}

TEST_CASE("trace rows are ordered and land on a vertex") {
  FunctionContext ctx{make_function("majority:3")};
  SamplePath p = sample_path_indexed(3, 1e-6, 0, 0);
  auto rows = trace_path(ctx, p, 0.01);
  REQUIRE(!rows.empty());
  CHECK(std::fabs(rows.front().value) <= 0.01);
  CHECK(std::fabs(rows.back().value) == 1.0);
  for (std::size_t k = 1; k < rows.size(); ++k)
    CHECK(rows[k].t > rows[k - 1].t);
  std::size_t jump_rows = 0;
  for (const auto& r : rows) jump_rows += r.is_jump ? 1 : 0;
  std::size_t jumps = 0;
  for (const auto& c : p.coords) jumps += c.jump_times.size();
  CHECK(jump_rows == jumps);
}
