// Command-line front end: analyze a function, run the verification corpus,
// emit sample-path traces, merge reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bfa/context.hpp"
#include "bfa/families.hpp"
#include "bfa/functionals.hpp"
#include "bfa/spectral.hpp"
#include "bfa/verify.hpp"

namespace {

constexpr int exit_bad_spec = 2;
constexpr int exit_capacity = 3;
constexpr int exit_io = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BFA_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw bfa::spec_error("BFA_SEED is not an integer");
    }
  }
  return 42;
}

// Writes to the path when given, stdout otherwise.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::ios_base::failure("cannot open output: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::ios_base::failure("error writing output");
  }

 private:
  std::ofstream file_;
};

std::vector<std::string> split_corpus(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_analyze(const std::string& spec, const std::string& out_path) {
  bfa::CubeFunction f = bfa::make_function(spec);
  bfa::SpectralStats st = bfa::spectral_stats(f);
  bfa::SensitivityProfile prof = bfa::sensitivity_profile(f);
  bfa::LevelWeights lw = bfa::level_weights(bfa::wht_forward(f));

  nlohmann::json j;
  j["function"] = spec;
  j["n"] = f.dim();
  j["mean"] = st.mean;
  j["variance"] = st.variance;
  j["influences"] = st.influences;
  j["total_influence"] = st.total_influence;
  j["sum_sq_influences"] = st.sum_sq_influences;
  j["is_monotone"] = st.monotone;

  nlohmann::json sens;
  sens["mean_sqrt"] = prof.mean_sqrt;
  sens["boundary_mass"] = prof.boundary_mass;
  sens["inner_boundary_mass"] = prof.inner_boundary_mass;
  sens["outer_boundary_mass"] = prof.outer_boundary_mass;
  sens["moments"] = {{"0.5", prof.moment(0.5)},
                     {"1", prof.moment(1.0)},
                     {"2", prof.moment(2.0)}};
  j["sensitivity"] = sens;

  {
    std::uint32_t plus = 0;
    for (double v : f.values())
      if (v > 0) ++plus;
    double mu = static_cast<double>(plus) / static_cast<double>(f.size());
    if (mu > 0.5) mu = 1.0 - mu;
    if (mu > 0.0 && st.total_influence > 0.0)
      j["isoperimetry_ratio"] =
          2.0 * mu * std::log2(1.0 / mu) / st.total_influence;
    else
      j["isoperimetry_ratio"] = nullptr;
  }

  nlohmann::json curve = nlohmann::json::array();
  for (int k = 0; k <= 20; ++k) {
    const double eps = 0.05 * k;
    curve.push_back({{"eps", eps}, {"value", lw.noise_form(1.0 - eps)}});
  }
  j["noise_stability"] = curve;

  double t_sum = 0.0;
  for (double inf : st.influences)
    if (inf > 0.0) t_sum += inf / (1.0 + std::log(1.0 / inf));
  j["talagrand"] = {{"T", t_sum},
                    {"r_tal", t_sum > 0.0 ? nlohmann::json(st.variance / t_sum)
                                          : nlohmann::json(nullptr)}};
  j["level_weights"] = lw.w;

  OutputSink sink(out_path);
  sink.stream() << j.dump(2) << "\n";
  sink.finish();
  return 0;
}

int run_verify(const bfa::VerifyConfig& cfg, const std::string& corpus_arg,
               const std::string& out_path) {
  std::vector<std::string> corpus = corpus_arg.empty()
                                        ? bfa::default_corpus()
                                        : split_corpus(corpus_arg);
  bfa::CorpusReport report = bfa::run_corpus(corpus, cfg);
  OutputSink sink(out_path);
  bfa::write_report_jsonl(report, sink.stream());
  sink.finish();

  std::size_t passed = 0, failed = 0, reports = 0;
  for (const auto& c : report.checks) {
    switch (c.status) {
      case bfa::CheckStatus::pass: ++passed; break;
      case bfa::CheckStatus::fail: ++failed; break;
      case bfa::CheckStatus::report: ++reports; break;
    }
  }
  std::cerr << "verify: " << passed << " pass, " << failed << " fail, "
            << reports << " report rows\n";
  return failed == 0 ? 0 : 1;
}

int run_paths(const std::string& spec, int count, double grid_step, double eps,
              std::uint64_t seed, const std::string& out_path) {
  bfa::CubeFunction f = bfa::make_function(spec);
  bfa::FunctionContext ctx{std::move(f)};
  OutputSink sink(out_path);
  std::ostream& os = sink.stream();
  os << "path_id,t,f_t,event\n";
  os.precision(17);
  for (int k = 0; k < count; ++k) {
    bfa::SamplePath path =
        bfa::sample_path_indexed(ctx.dim(), eps, seed, static_cast<std::uint64_t>(k));
    for (const auto& pt : bfa::trace_path(ctx, path, grid_step))
      os << k << ',' << pt.t << ',' << pt.value << ','
         << (pt.is_jump ? "jump" : "grid") << "\n";
  }
  sink.finish();
  return 0;
}

int run_merge(const std::vector<std::string>& inputs,
              const std::string& out_path) {
  std::vector<bfa::CorpusReport> reports;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open report: " + path);
    reports.push_back(bfa::read_report_jsonl(in));
  }
  bfa::CorpusReport merged = bfa::merge_reports(reports);
  OutputSink sink(out_path);
  bfa::write_report_jsonl(merged, sink.stream());
  sink.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean-function analytics and pathwise verification"};
  app.require_subcommand(1);

  std::string function_spec, corpus_arg, out_path;
  std::uint64_t n_paths = 100000;
  double eps = 1e-6;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double alpha = 0.5, p_exp = 0.5;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  int count = 5;
  double grid_step = 0.001;
  std::vector<std::string> merge_inputs;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--eps", eps, "Path truncation time")
        ->check(CLI::Range(1e-9, 1e-2));
    cmd->add_option("--seed", seed, "Master seed")->each([&](const std::string&) {
      seed_given = true;
    });
    cmd->add_option("--out", out_path, "Output file (stdout when omitted)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Spectral analysis of one function");
  analyze->add_option("--function", function_spec, "Family spec string")->required();
  analyze->add_option("--out", out_path, "Output file (stdout when omitted)");

  CLI::App* verify = app.add_subcommand("verify", "Run the verification corpus");
  verify->add_option("--corpus", corpus_arg, "Comma-separated family specs");
  verify->add_option("--function", function_spec, "Single function corpus");
  verify->add_option("--paths", n_paths, "Paths per Monte Carlo row")
      ->check(CLI::PositiveNumber);
  verify->add_option("--alpha", alpha, "Derivative threshold")
      ->check(CLI::Range(1e-9, 1.0));
  verify->add_option("--p", p_exp, "Gradient exponent")
      ->check(CLI::Range(0.5, 1.0));
  verify->add_option("--workers", workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  add_common(verify);

  CLI::App* paths = app.add_subcommand("paths", "Emit sample-path traces as CSV");
  paths->add_option("--function", function_spec, "Family spec string")->required();
  paths->add_option("--count", count, "Number of paths")->check(CLI::PositiveNumber);
  paths->add_option("--grid-step", grid_step, "Trace grid step")
      ->check(CLI::Range(1e-6, 1.0));
  add_common(paths);

  CLI::App* merge = app.add_subcommand("report-merge", "Merge report JSONL files");
  merge->add_option("inputs", merge_inputs, "Report files")->required();
  merge->add_option("--out", out_path, "Output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!seed_given) seed = default_seed();
    if (analyze->parsed()) return run_analyze(function_spec, out_path);
    if (verify->parsed()) {
      const bool corpus_given = verify->count("--corpus") > 0;
      if (!function_spec.empty()) {
        if (corpus_given)
          throw bfa::spec_error("--function and --corpus are exclusive");
        corpus_arg = function_spec;
      } else if (corpus_given && split_corpus(corpus_arg).empty()) {
        throw bfa::spec_error("empty corpus");
      }
      bfa::VerifyConfig cfg;
      cfg.seed = seed;
      cfg.eps = eps;
      cfg.n_paths = n_paths;
      cfg.workers = workers;
      cfg.alpha = alpha;
      cfg.p = p_exp;
      return run_verify(cfg, corpus_arg, out_path);
    }
    if (paths->parsed())
      return run_paths(function_spec, count, grid_step, eps, seed, out_path);
    if (merge->parsed()) return run_merge(merge_inputs, out_path);
  } catch (const bfa::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return exit_capacity;
  } catch (const bfa::spec_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_spec;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_spec;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
