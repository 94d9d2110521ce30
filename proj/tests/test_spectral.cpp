#include "doctest.h"

#include "bfa/spectral.hpp"

#include <cmath>

#include "bfa/families.hpp"
#include "test_util.hpp"

using namespace bfa;

TEST_CASE("majority-of-three statistics") {
  SpectralStats st = spectral_stats(test::maj3());
  CHECK(st.mean == 0.0);
  CHECK(st.variance == 1.0);
  for (double inf : st.influences) CHECK(inf == 0.5);
  CHECK(st.total_influence == 1.5);
  CHECK(st.sum_sq_influences == doctest::Approx(0.75));
  CHECK(st.monotone);
}

TEST_CASE("parity and dictator statistics") {
  SpectralStats sp = spectral_stats(make_function("parity:4"));
  for (double inf : sp.influences) CHECK(inf == 1.0);
  CHECK(sp.total_influence == 4.0);
  CHECK_FALSE(sp.monotone);

  SpectralStats sd = spectral_stats(make_function("dictator:3"));
  CHECK(sd.influences[0] == 1.0);
  CHECK(sd.influences[1] == 0.0);
  CHECK(sd.influences[2] == 0.0);
  CHECK(sd.monotone);
  FourierExpansion e = wht_forward(make_function("dictator:3"));
  CHECK(sd.influences[0] == doctest::Approx(e.coeff(1)).epsilon(1e-15));
}

TEST_CASE("sensitivity profile of majority-of-three") {
  SensitivityProfile p = sensitivity_profile(test::maj3());
  for (std::uint32_t m = 0; m < 8; ++m) {
    const int pc = std::popcount(m);
    CHECK(p.sensitivity[m] == ((pc == 0 || pc == 3) ? 0 : 2));
  }
  CHECK(p.mean_sqrt == doctest::Approx(3.0 * std::sqrt(2.0) / 4.0));
  CHECK(p.boundary_mass == doctest::Approx(0.75));
  CHECK(p.inner_boundary_mass == doctest::Approx(0.375));
  CHECK(p.outer_boundary_mass == doctest::Approx(0.375));
  CHECK(p.moment(1.0) == doctest::Approx(1.5));  // total influence
  CHECK_THROWS_AS(p.moment(0.0), std::domain_error);
}

TEST_CASE("sensitivity of parity and dictator") {
  SensitivityProfile pp = sensitivity_profile(make_function("parity:5"));
  for (int h : pp.sensitivity) CHECK(h == 5);
  CHECK(pp.mean_sqrt == doctest::Approx(std::sqrt(5.0)));
  CHECK(pp.boundary_mass == 1.0);

  SensitivityProfile pd = sensitivity_profile(make_function("dictator:4"));
  CHECK(pd.inner_boundary_mass == doctest::Approx(0.5));
  CHECK(pd.outer_boundary_mass == doctest::Approx(0.5));
  CHECK(pd.boundary_mass == 1.0);
}

TEST_CASE("influence double identity") {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    CubeFunction f = test::random_boolean(5, 300 + rep);
    const double inv = 1.0 / static_cast<double>(f.size());
    for (int i = 0; i < 5; ++i) {
      CubeFunction d = derivative(f, i);
      double sq = 0.0, ab = 0.0;
      for (double v : d.values()) {
        sq += v * v;
        ab += std::fabs(v);
      }
      CHECK(sq * inv == ab * inv);
    }
  }
}

TEST_CASE("noise stability equals the time-variance curve") {
  CubeFunction f = test::random_boolean(6, 17);
  for (double eps : {0.0, 0.1, 0.35, 0.8, 1.0}) {
    CHECK(noise_stability(f, eps) ==
          doctest::Approx(time_variance(f, std::sqrt(1.0 - eps)))
              .epsilon(1e-13));
  }
  CubeFunction dict = make_function("dictator:2");
  for (double t : {0.0, 0.3, 0.9})
    CHECK(time_variance(dict, t) == doctest::Approx(t * t));
}

TEST_CASE("influence process second moments of majority-of-three") {
  CubeFunction f = test::maj3();
  for (double t : {0.0, 0.25, 0.6, 1.0}) {
    const double expected = (1.0 + std::pow(t, 4)) / 4.0;
    CHECK(psi_value(f, 0, t) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(r_value(f, t) == doctest::Approx(3.0 * expected).epsilon(1e-13));
  }
  CHECK(psi_value(f, 0, 0.0) == doctest::Approx(0.25));
  CHECK(psi_value(f, 0, 1.0) == doctest::Approx(0.5));
  CHECK(r_value(f, 0.0) == doctest::Approx(0.75));  // sum of squared influences
}

TEST_CASE("influence process curve against the enumeration oracle") {
  CubeFunction f = test::random_boolean(5, 23);
  for (int i : {0, 2, 4}) {
    CubeFunction a = abs_derivative(f, i);
    for (double t : {0.2, 0.5, 0.85}) {
      CHECK(psi_value(f, i, t) ==
            doctest::Approx(test::brute_second_moment_at_time(a, t))
                .epsilon(1e-11));
    }
  }
}

TEST_CASE("monotone rearrangement") {
  CubeFunction parity2(2, {1, -1, -1, 1}, ValueKind::boolean);
  CubeFunction k1 = monotonize(parity2, 0);
  // the rearrangement along the first coordinate gives the dictator
  CHECK(k1[0] == -1.0);
  CHECK(k1[1] == 1.0);
  CHECK(k1[2] == -1.0);
  CHECK(k1[3] == 1.0);

  CubeFunction maj = test::maj3();
  CubeFunction km = monotonize(maj, 1);
  for (std::uint32_t m = 0; m < 8; ++m) CHECK(km[m] == maj[m]);

  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    CubeFunction f = test::random_boolean(4, 900 + rep);
    CHECK(is_monotone(monotonize_chain(f)));
  }
}

TEST_CASE("spectral stats requires sign tables") {
  CubeFunction g(2, {0.5, 0.25, 1.0, 0.0}, ValueKind::unit);
  CHECK_THROWS_AS(spectral_stats(g), spec_error);
}
