// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. The CLI binary path is taken
// from argv[1] for the trace-reproduction criterion.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bfa/biased.hpp"
#include "bfa/extension.hpp"
#include "bfa/families.hpp"
#include "bfa/functionals.hpp"
#include "bfa/path.hpp"
#include "bfa/rng.hpp"
#include "bfa/spectral.hpp"
#include "bfa/verify.hpp"
#include "bfa/wht.hpp"

using namespace bfa;

namespace {

struct Outcome {
  int id;
  std::string label;
  bool ok;
  std::string detail;
  double seconds;
};

std::vector<Outcome> outcomes;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <class Fn>
void criterion(int id, const std::string& label, Fn&& fn) {
  Timer timer;
  bool ok = false;
  std::string detail;
  try {
    detail = fn();
    ok = true;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  outcomes.push_back({id, label, ok, detail, timer.seconds()});
}

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::map<std::string, CheckResult> by_id(const std::vector<CheckResult>& rows) {
  std::map<std::string, CheckResult> out;
  for (const auto& r : rows) out[r.check_id] = r;
  return out;
}

VerifyConfig base_config() {
  VerifyConfig cfg;
  cfg.seed = 42;
  cfg.eps = 1e-6;
  cfg.n_paths = 100000;
  cfg.workers = 1;
  return cfg;
}

// Independent oracle: direct vertex loops only.
struct BruteStats {
  double variance = 0.0;
  double sum_sq_influences = 0.0;
  double mean_sqrt_sensitivity = 0.0;
};

BruteStats brute_stats(const CubeFunction& f) {
  BruteStats out;
  const double inv = 1.0 / static_cast<double>(f.size());
  double mean = 0.0;
  for (double v : f.values()) mean += v * inv;
  out.variance = 1.0 - mean * mean;
  for (int i = 0; i < f.dim(); ++i) {
    std::uint32_t disagree = 0;
    for (std::uint32_t m = 0; m < f.size(); ++m)
      if (f[m] != f[m ^ (std::uint32_t{1} << i)]) ++disagree;
    const double inf = static_cast<double>(disagree) * inv;
    out.sum_sq_influences += inf * inf;
  }
  for (std::uint32_t m = 0; m < f.size(); ++m) {
    int h = 0;
    for (int i = 0; i < f.dim(); ++i)
      if (f[m] != f[m ^ (std::uint32_t{1} << i)]) ++h;
    out.mean_sqrt_sensitivity += std::sqrt(static_cast<double>(h)) * inv;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";
  const auto corpus = default_corpus();
  const VerifyConfig cfg = base_config();

  criterion(1, "exact spectral suite", [&] {
    Timer t;
    for (const auto& spec : corpus) {
      CubeFunction f = make_function(spec);
      auto rows = by_id(run_exact_checks(f, spec, cfg));
      require(rows.at("wht_roundtrip").status == CheckStatus::pass &&
                  rows.at("wht_roundtrip").lhs == 0.0,
              spec + ": transform round trip not bit-exact");
      require(rows.at("parseval").status == CheckStatus::pass,
              spec + ": parseval gap above 1e-12");
      require(rows.at("influence_double_identity").status == CheckStatus::pass,
              spec + ": influence double identity broken");
      if (rows.count("monotone_influence_level1"))
        require(rows.at("monotone_influence_level1").status ==
                    CheckStatus::pass,
                spec + ": monotone influence/level-1 identity above 1e-12");
    }
    require(t.seconds() < 5.0,
            "runtime " + fmt(t.seconds()) + " s exceeds 5 s");
    return "13 functions, " + fmt(t.seconds()) + " s";
  });

  criterion(2, "variance as the jump integral, closed form", [&] {
    Timer t;
    double worst = 0.0;
    for (const auto& spec : corpus) {
      CubeFunction f = make_function(spec);
      auto rows = by_id(run_exact_checks(f, spec, cfg));
      const auto& row = rows.at("variance_jump_integral");
      require(row.status == CheckStatus::pass,
              spec + ": |Var - closed form| above 1e-10");
      worst = std::max(worst, std::fabs(row.lhs - row.rhs));
      if (spec == "majority:3") {
        require(std::fabs(row.lhs - 1.0) <= 1e-12 &&
                    std::fabs(row.rhs - 1.0) <= 1e-12,
                "majority:3 sides are not both 1");
      }
    }
    require(t.seconds() < 10.0,
            "runtime " + fmt(t.seconds()) + " s exceeds 10 s");
    return "max |lhs-rhs| = " + fmt(worst) + ", " + fmt(t.seconds()) + " s";
  });

  criterion(3, "constant-free inequalities", [&] {
    for (const auto& spec : corpus) {
      CubeFunction f = make_function(spec);
      auto rows = by_id(run_exact_checks(f, spec, cfg));
      require(rows.at("poincare").status == CheckStatus::pass,
              spec + ": poincare failed");
      require(rows.at("edge_isoperimetry").status != CheckStatus::fail,
              spec + ": isoperimetry failed");
      require(rows.at("sqrt_sensitivity_bound").status == CheckStatus::pass,
              spec + ": sensitivity bound failed");
    }
    auto sub = by_id(run_exact_checks(make_function("subcube:8:3"),
                                      "subcube:8:3", cfg));
    const double gap =
        sub.at("edge_isoperimetry").meta.at("equality_gap").get<double>();
    require(std::fabs(gap) <= 1e-12, "subcube equality gap " + fmt(gap));
    auto maj = by_id(run_exact_checks(make_function("majority:3"),
                                      "majority:3", cfg));
    require(maj.at("sqrt_sensitivity_bound").lhs == 0.25 &&
                std::fabs(maj.at("sqrt_sensitivity_bound").rhs - 0.75) <= 1e-12,
            "majority:3 sensitivity bound is not 0.25 <= 0.75");
    return "subcube gap " + fmt(gap);
  });

  criterion(4, "variance estimate from quadratic variation", [&] {
    CubeFunction f = make_function("majority:9");
    const double exact = spectral_stats(f).variance;
    Timer t;
    MCEstimate serial = mc_variance_via_qv(f, 100000, 1e-6, 42, 1);
    const double serial_s = t.seconds();
    require(serial_s <= 60.0,
            "single-thread runtime " + fmt(serial_s) + " s exceeds 60 s");
    require(std::fabs(serial.mean - exact) <= 3.0 * serial.std_error,
            "estimate " + fmt(serial.mean) + " off exact " + fmt(exact) +
                " by more than 3 SE (" + fmt(serial.std_error) + ")");
    MCEstimate wide = mc_variance_via_qv(f, 100000, 1e-6, 42, 8);
    require(serial.mean == wide.mean && serial.std_error == wide.std_error,
            "1-worker and 8-worker results differ");
    return "estimate " + fmt(serial.mean) + " +- " + fmt(serial.std_error) +
           ", exact " + fmt(exact) + ", " + fmt(serial_s) + " s single-thread";
  });

  criterion(5, "sampler jump laws and hesitant uniformity", [&] {
    const int n = 4;
    const std::uint64_t n_paths = 1000000;
    const std::uint64_t seed = 42;
    const double lo = std::exp(-2.0);
    double count_sum = 0.0, count_sq = 0.0, flip_sum = 0.0;
    std::vector<std::uint64_t> endpoint(16, 0);
    for (std::uint64_t k = 0; k < n_paths; ++k) {
      Rng rng(derive_stream(seed, k));
      SamplePath path = sample_path(n, 1e-6, rng);
      HesitantOverlay overlay = hesitant_sample(path, rng);
      auto end = hesitant_point_at(path, overlay, 1.0);
      std::uint32_t mask = 0;
      for (int i = 0; i < n; ++i)
        if (end[i] > 0.0) mask |= std::uint32_t{1} << i;
      ++endpoint[mask];
      for (int i = 0; i < n; ++i) {
        double cnt = 0.0;
        for (double tj : path.coords[i].jump_times)
          if (tj > lo) ++cnt;
        count_sum += cnt;
        count_sq += cnt * cnt;
        flip_sum +=
            path.coords[i].sign_at(0.5) != path.coords[i].sign_at(0.6) ? 1.0
                                                                       : 0.0;
      }
    }
    const double big_n = static_cast<double>(n_paths) * n;
    const double mean = count_sum / big_n;
    const double se_mean =
        std::sqrt((count_sq / big_n - mean * mean) / big_n);
    require(std::fabs(mean - 1.0) <= 3.0 * se_mean,
            "jump count mean " + fmt(mean) + " off 1.0");
    const double p_flip = flip_sum / big_n;
    const double se_flip = std::sqrt(p_flip * (1.0 - p_flip) / big_n);
    require(std::fabs(p_flip - 1.0 / 12.0) <= 3.0 * se_flip,
            "flip frequency " + fmt(p_flip) + " off 1/12");
    double maxdev = 0.0;
    for (auto c : endpoint)
      maxdev = std::max(maxdev,
                        std::fabs(static_cast<double>(c) /
                                      static_cast<double>(n_paths) -
                                  1.0 / 16.0));
    require(maxdev <= 0.01,
            "hesitant endpoint deviation " + fmt(maxdev) + " above 0.01");
    return "count mean " + fmt(mean) + ", flip " + fmt(p_flip) +
           ", endpoint max dev " + fmt(maxdev);
  });

  criterion(6, "jump-sum / integral identity, Monte Carlo", [&] {
    JumpIntegralCheck c1 = mc_jump_integral_check(
        make_function("dictator:1"), JumpTestFn::one, 0, 0.25, 1.0, 100000,
        1e-6, 42, 1);
    require(std::fabs(c1.rhs - 0.9375) <= 1e-15, "window form not 0.9375");
    require(std::fabs(c1.lhs.mean - c1.rhs) <= 3.0 * c1.lhs.std_error,
            "constant test " + fmt(c1.lhs.mean) + " off " + fmt(c1.rhs));
    JumpIntegralCheck c2 = mc_jump_integral_check(
        make_function("majority:3"), JumpTestFn::influence_sq, 0, 0.0, 1.0,
        100000, 1e-6, 43, 1);
    require(std::fabs(c2.rhs - 1.0 / 3.0) <= 1e-12,
            "majority:3 influence form not 1/3");
    require(std::fabs(c2.lhs.mean - c2.rhs) <= 3.0 * c2.lhs.std_error,
            "influence test " + fmt(c2.lhs.mean) + " off 1/3");
    return "const " + fmt(c1.lhs.mean) + " vs 0.9375; influence " +
           fmt(c2.lhs.mean) + " vs 1/3";
  });

  criterion(7, "log-convexity, growth envelope, tail integral", [&] {
    VerifyConfig quiet = cfg;
    quiet.mc_rows = false;
    std::size_t tail_pass = 0;
    for (const auto& spec : corpus) {
      CubeFunction f = make_function(spec);
      auto rows = by_id(run_lemma_checks(f, spec, quiet));
      const auto& lc = rows.at("influence_log_convexity");
      require(lc.status == CheckStatus::pass && lc.lhs >= -1e-10,
              spec + ": influence log-convexity slack " + fmt(lc.lhs));
      const auto& gc = rows.at("gradient_moment_log_convexity");
      require(gc.status != CheckStatus::fail,
              spec + ": gradient log-convexity failed");
      const auto& ge = rows.at("growth_envelope");
      require(ge.status == CheckStatus::pass && ge.lhs <= 1e-8,
              spec + ": growth envelope violation " + fmt(ge.lhs));
      const auto& tail = rows.at("log_convex_tail_integral");
      require(tail.status != CheckStatus::fail,
              spec + ": tail integral failed");
      if (tail.status == CheckStatus::pass) ++tail_pass;
    }
    require(tail_pass >= 1, "no corpus member exercised the tail bound");
    return "tail bound exercised on " + std::to_string(tail_pass) +
           " members";
  });

  criterion(8, "monotone rearrangement property run", [&] {
    const std::vector<double> eps_grid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                          0.6, 0.7, 0.8, 0.9};
    int violations = 0;
    for (int rep = 0; rep < 200; ++rep) {
      const int n = 3 + rep % 4;  // dimensions 3..6
      Rng rng(derive_stream(4242, rep));
      std::vector<double> v(std::size_t{1} << n);
      for (auto& x : v) x = rng.next_unit() < 0.5 ? 1.0 : -1.0;
      CubeFunction f(n, v, ValueKind::boolean);
      SpectralStats st = spectral_stats(f);
      LevelWeights lw = level_weights(wht_forward(f));
      for (int j = 0; j < n; ++j) {
        CubeFunction kj = monotonize(f, j);
        SpectralStats stj = spectral_stats(kj);
        for (int i = 0; i < n; ++i)
          if (stj.influences[i] > st.influences[i] + 1e-12) ++violations;
        LevelWeights lwj = level_weights(wht_forward(kj));
        for (double e : eps_grid)
          if (lwj.noise_form(1.0 - e) < lw.noise_form(1.0 - e) - 1e-12)
            ++violations;
      }
      if (!is_monotone(monotonize_chain(f))) ++violations;
    }
    require(violations == 0,
            std::to_string(violations) + " violations in 200 runs");
    return "200 functions, zero violations";
  });

  criterion(9, "biased derivative identity, unit factor", [&] {
    // dictator closed form at p = 3/4
    {
      BiasedExpansion e = biased_transform(make_function("dictator:1"),
                                           BiasedBasisParams{{0.75}});
      require(std::fabs(e.coeff(1) - std::sqrt(3.0) / 2.0) <= 1e-12,
              "dictator coefficient is not sqrt(3)/2");
    }
    CubeFunction f = make_function("random:6:9001");
    Rng rng(31337);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      BiasedBasisParams prm;
      prm.p.resize(6);
      for (auto& p : prm.p) p = 0.05 + 0.9 * rng.next_unit();
      for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) {
          const std::uint32_t subset =
              (std::uint32_t{1} << i) | (std::uint32_t{1} << j);
          if (std::popcount(subset) > 2) continue;
          DerivativeIdentity id = biased_derivative_identity(f, prm, subset);
          const double scale = std::max({1.0, std::fabs(id.lhs),
                                         std::fabs(id.rhs)});
          worst = std::max(worst, std::fabs(id.lhs - id.rhs) / scale);
        }
      }
    }
    require(worst <= 1e-10, "relative error " + fmt(worst) + " above 1e-10");
    return "max relative error " + fmt(worst);
  });

  criterion(10, "boundary mass against large-derivative jumps", [&] {
    // dictator with alpha = 1: the bound is met with equality
    BoundaryBound d = estimate_boundary_bound(make_function("dictator:2"), 1.0,
                                              20000, 1e-9, 42, 1);
    const double se_bound = 0.5 * d.p_large_jump.std_error;
    require(std::fabs(0.5 - d.bound()) <= 3.0 * se_bound,
            "dictator bound " + fmt(d.bound()) + " not within 3 SE of 0.5");
    std::string detail = "dictator " + fmt(d.bound());
    auto maj = estimate_boundary_bound_multi(
        make_function("majority:3"), {0.25, 0.5, 1.0}, 100000, 1e-6, 43, 1);
    for (const auto& b : maj) {
      require(b.margin() >= -3.0 * 0.5 * b.alpha * b.p_large_jump.std_error,
              "majority:3 margin at alpha " + fmt(b.alpha) + " is " +
                  fmt(b.margin()));
    }
    return detail + "; majority:3 margins clear at three thresholds";
  });

  criterion(11, "witness moments and locked ratios", [&] {
    VerifyConfig sweep_cfg = cfg;
    sweep_cfg.workers = 4;
    int witness_rows = 0;
    for (const auto& spec : corpus) {
      CubeFunction f = make_function(spec);
      auto rows = by_id(run_constant_sweeps(f, spec, sweep_cfg));
      if (rows.count("witness_second_moment")) {
        require(rows.at("witness_second_moment").status == CheckStatus::pass,
                spec + ": E[g^2] above 2 Var + 3 SE");
        ++witness_rows;
      }
      if (rows.count("sqrt_sensitivity_log_ratio") &&
          !rows.at("sqrt_sensitivity_log_ratio").meta.contains("reason")) {
        BruteStats oracle = brute_stats(f);
        const double expected =
            oracle.mean_sqrt_sensitivity /
            (oracle.variance *
             std::sqrt(std::log(2.0 + std::exp(1.0) /
                                          oracle.sum_sq_influences)));
        const double got = rows.at("sqrt_sensitivity_log_ratio").lhs;
        require(std::fabs(got - expected) <= 1e-3,
                spec + ": ratio " + fmt(got) + " off oracle " + fmt(expected));
        if (spec == "majority:3")
          require(std::fabs(got - 0.807) <= 1e-3,
                  "majority:3 ratio " + fmt(got) + " not 0.807(1e-3)");
      }
    }
    require(witness_rows >= 8, "expected witness rows on the n <= 8 members");
    return std::to_string(witness_rows) + " witness rows within bound";
  });

  criterion(12, "trace reproduction through the CLI", [&] {
    require(!cli_path.empty(), "CLI binary path missing (argv[1])");
    const std::string out = "acceptance_traces.csv";
    Timer t;
    const std::string cmd = cli_path +
                            " paths --function majority:15 --count 5 --out " +
                            out;
    require(std::system(cmd.c_str()) == 0, "CLI invocation failed");
    const double elapsed = t.seconds();
    require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s exceeds 5 s");
    std::ifstream in(out);
    require(static_cast<bool>(in), "trace file missing");
    std::string line;
    std::getline(in, line);
    require(line == "path_id,t,f_t,event", "unexpected CSV header");
    std::map<int, std::vector<std::pair<double, double>>> traces;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string pid_s, t_s, v_s, ev_s;
      std::getline(ss, pid_s, ',');
      std::getline(ss, t_s, ',');
      std::getline(ss, v_s, ',');
      std::getline(ss, ev_s, ',');
      traces[std::stoi(pid_s)].emplace_back(std::stod(t_s), std::stod(v_s));
    }
    require(traces.size() == 5, "expected 5 traces, saw " +
                                    std::to_string(traces.size()));
    for (const auto& [pid, rows] : traces) {
      require(!rows.empty(), "empty trace");
      require(std::fabs(rows.front().second) <= 0.01,
              "trace " + std::to_string(pid) + " starts at " +
                  fmt(rows.front().second));
      require(std::fabs(rows.back().second) == 1.0,
              "trace " + std::to_string(pid) + " ends at " +
                  fmt(rows.back().second));
      for (std::size_t k = 1; k < rows.size(); ++k)
        require(rows[k].first > rows[k - 1].first,
                "trace times not strictly increasing");
    }
    std::remove(out.c_str());
    return "5 traces, start near 0, end at +-1, " + fmt(elapsed) + " s";
  });

  bool all_ok = true;
  for (const auto& o : outcomes) {
    all_ok = all_ok && o.ok;
    std::printf("[%s] criterion %02d  %-48s (%.2f s)  %s\n",
                o.ok ? "PASS" : "FAIL", o.id, o.label.c_str(), o.seconds,
                o.detail.c_str());
  }
  std::printf("%s: %zu/%zu criteria passed\n", all_ok ? "PASS" : "FAIL",
              outcomes.size() -
                  static_cast<std::size_t>(std::count_if(
                      outcomes.begin(), outcomes.end(),
                      [](const Outcome& o) { return !o.ok; })),
              outcomes.size());
  return all_ok ? 0 : 1;
}
