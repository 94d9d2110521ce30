#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bfa/cube_function.hpp"

namespace bfa {

enum class CheckStatus { pass, fail, report };

std::string to_string(CheckStatus s);

// One verified identity, inequality or recorded empirical constant.
struct CheckResult {
  std::string function_spec;
  std::string check_id;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;
  CheckStatus status = CheckStatus::report;
  std::optional<double> std_error;
  std::optional<std::uint64_t> n_samples;
  nlohmann::json meta = nlohmann::json::object();

  nlohmann::json to_json() const;
  static CheckResult from_json(const nlohmann::json& j);
};

struct VerifyConfig {
  std::uint64_t seed = 42;
  double eps = 1e-6;
  std::uint64_t n_paths = 100000;
  int workers = 1;
  double alpha = 0.5;
  double p = 0.5;

  int max_exact_dim = 16;  // exact suite capacity
  int max_mc_dim = 12;     // per-jump evaluation rows
  int max_gf_dim = 8;      // endpoint-conditioned estimate rows
  bool mc_rows = true;     // include the Monte Carlo rows

  std::vector<double> p_exponents = {0.5, 0.75, 0.99};
  std::vector<double> boundary_alphas = {0.25, 0.5, 1.0};
  std::vector<double> level_t_grid = {0.0, 0.25, 0.5};
  int level_sample_points = 64;
  double s_grid_max = 5.0;
  double s_grid_step = 0.25;
  std::vector<double> tail_horizons = {1.0, 2.0, 3.0, 5.0};

  std::string version = "0.1.0";
};

// Deterministic pass/fail identities and constant-free inequalities.
std::vector<CheckResult> run_exact_checks(const CubeFunction& f,
                                          const std::string& name,
                                          const VerifyConfig& cfg);

// Report-only rows: fitted stand-ins for the unspecified universal
// constants, recorded per function.
std::vector<CheckResult> run_constant_sweeps(const CubeFunction& f,
                                             const std::string& name,
                                             const VerifyConfig& cfg);

// Log-convexity, growth-envelope and monotonization checks, plus the
// seeded Monte Carlo rows (3-standard-error rule).
std::vector<CheckResult> run_lemma_checks(const CubeFunction& f,
                                          const std::string& name,
                                          const VerifyConfig& cfg);

// Function-independent sampler-law rows, reported once per corpus under
// the pseudo-entry "path-law".
std::vector<CheckResult> run_path_law_checks(const VerifyConfig& cfg);

struct CorpusReport {
  nlohmann::json environment;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

CorpusReport run_corpus(const std::vector<std::string>& corpus,
                        const VerifyConfig& cfg);

void write_report_jsonl(const CorpusReport& report, std::ostream& out);
CorpusReport read_report_jsonl(std::istream& in);
CorpusReport merge_reports(const std::vector<CorpusReport>& reports);

}  // namespace bfa
