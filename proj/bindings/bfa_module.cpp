#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bfa/biased.hpp"
#include "bfa/context.hpp"
#include "bfa/extension.hpp"
#include "bfa/families.hpp"
#include "bfa/functionals.hpp"
#include "bfa/path.hpp"
#include "bfa/spectral.hpp"
#include "bfa/verify.hpp"
#include "bfa/wht.hpp"

namespace py = pybind11;
using namespace bfa;

namespace {

const char* kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::boolean: return "boolean";
    case ValueKind::derivative: return "derivative";
    case ValueKind::unit: return "unit";
    case ValueKind::general: return "general";
  }
  return "general";
}

py::dict estimate_dict(const MCEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["n_samples"] = e.n_samples;
  d["seed"] = e.seed;
  return d;
}

py::object json_to_py(const nlohmann::json& j) {
  py::module_ json = py::module_::import("json");
  return json.attr("loads")(j.dump());
}

py::dict stats_dict(const SpectralStats& st) {
  py::dict d;
  d["mean"] = st.mean;
  d["variance"] = st.variance;
  d["influences"] = st.influences;
  d["total_influence"] = st.total_influence;
  d["sum_sq_influences"] = st.sum_sq_influences;
  d["is_monotone"] = st.monotone;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Boolean-function analytics with a pathwise verification engine";

  py::register_exception<spec_error>(m, "SpecError", PyExc_ValueError);
  py::register_exception<capacity_error>(m, "CapacityError", PyExc_RuntimeError);

  py::class_<CubeFunction>(m, "CubeFunction")
      .def(py::init([](int n, const std::vector<double>& values,
                       const std::string& kind) {
             ValueKind k = kind == "boolean"      ? ValueKind::boolean
                           : kind == "derivative" ? ValueKind::derivative
                           : kind == "unit"       ? ValueKind::unit
                                                  : ValueKind::general;
             return CubeFunction(n, values, k);
           }),
           py::arg("n"), py::arg("values"), py::arg("kind") = "general")
      .def_property_readonly("n", &CubeFunction::dim)
      .def_property_readonly("kind",
                             [](const CubeFunction& f) { return kind_name(f.kind()); })
      .def("values", [](const CubeFunction& f) { return f.values(); })
      .def("__getitem__",
           [](const CubeFunction& f, std::uint32_t mask) {
             if (mask >= f.size()) throw py::index_error();
             return f[mask];
           })
      .def("__len__", [](const CubeFunction& f) { return f.size(); })
      .def("__repr__", [](const CubeFunction& f) {
        std::ostringstream os;
        os << "CubeFunction(n=" << f.dim() << ", kind=" << kind_name(f.kind())
           << ")";
        return os.str();
      });

  m.def("make_function", &make_function, py::arg("spec"));
  m.def("default_corpus", &default_corpus);

  m.def("wht_forward", [](const CubeFunction& f) {
    return wht_forward(f).coeffs;
  });
  m.def("wht_inverse", [](int n, const std::vector<double>& coeffs) {
    return wht_inverse(FourierExpansion{n, coeffs});
  });
  m.def("level_weights", [](const CubeFunction& f) {
    return level_weights(wht_forward(f)).w;
  });

  m.def("eval_extension",
        [](const CubeFunction& f, const std::vector<double>& x) {
          return eval_extension(f, x);
        });
  m.def("gradient_extension",
        [](const CubeFunction& f, const std::vector<double>& x) {
          return gradient_extension(f, x);
        });
  m.def("hessian_hs_sq",
        [](const CubeFunction& f, const std::vector<double>& x) {
          return hessian_hs_sq(f, x);
        });

  m.def("derivative", &derivative, py::arg("f"), py::arg("coord"));
  m.def("abs_derivative", &abs_derivative, py::arg("f"), py::arg("coord"));
  m.def("monotonize", &monotonize, py::arg("f"), py::arg("coord"));
  m.def("monotonize_chain", &monotonize_chain);
  m.def("is_monotone", &is_monotone);

  m.def("spectral_stats",
        [](const CubeFunction& f) { return stats_dict(spectral_stats(f)); });
  m.def("sensitivity_profile", [](const CubeFunction& f) {
    SensitivityProfile p = sensitivity_profile(f);
    py::dict d;
    d["sensitivity"] = p.sensitivity;
    d["boundary_mass"] = p.boundary_mass;
    d["inner_boundary_mass"] = p.inner_boundary_mass;
    d["outer_boundary_mass"] = p.outer_boundary_mass;
    d["mean_sqrt"] = p.mean_sqrt;
    return d;
  });
  m.def("sensitivity_moment", [](const CubeFunction& f, double p) {
    return sensitivity_profile(f).moment(p);
  });

  m.def("noise_stability", &noise_stability, py::arg("f"), py::arg("eps"));
  m.def("time_variance", &time_variance, py::arg("f"), py::arg("t"));
  m.def("r_value", &r_value, py::arg("f"), py::arg("t"));
  m.def("psi_value", &psi_value, py::arg("f"), py::arg("coord"), py::arg("t"));

  m.def("biased_transform",
        [](const CubeFunction& f, const std::vector<double>& p) {
          return biased_transform(f, BiasedBasisParams{p}).coeffs;
        });
  m.def("biased_influence",
        [](const CubeFunction& f, const std::vector<double>& p, int coord) {
          return biased_influence(f, BiasedBasisParams{p}, coord);
        });
  m.def("biased_derivative_identity",
        [](const CubeFunction& f, const std::vector<double>& p,
           std::uint32_t subset) {
          DerivativeIdentity id =
              biased_derivative_identity(f, BiasedBasisParams{p}, subset);
          return py::make_tuple(id.lhs, id.rhs);
        });

  m.def("next_jump_time", &next_jump_time, py::arg("t"), py::arg("u"));

  py::class_<SamplePath>(m, "SamplePath")
      .def_property_readonly("n", [](const SamplePath& p) { return p.n; })
      .def_property_readonly("truncation",
                             [](const SamplePath& p) { return p.truncation; })
      .def("jump_times",
           [](const SamplePath& p, int coord) {
             if (coord < 0 || coord >= p.n) throw py::index_error();
             return p.coords[coord].jump_times;
           })
      .def("sign_at",
           [](const SamplePath& p, int coord, double t) {
             if (coord < 0 || coord >= p.n) throw py::index_error();
             return p.coords[coord].sign_at(t);
           })
      .def("point_at",
           [](const SamplePath& p, double t) { return point_at(p, t); })
      .def("endpoint_mask",
           [](const SamplePath& p) { return endpoint_mask(p); });

  m.def("sample_path",
        [](int n, double eps, std::uint64_t seed, std::uint64_t index) {
          return sample_path_indexed(n, eps, seed, index);
        },
        py::arg("n"), py::arg("eps") = 1e-6, py::arg("seed") = 42,
        py::arg("index") = 0);

  m.def("path_observables",
        [](const CubeFunction& f, const SamplePath& path, double alpha,
           double p) {
          FunctionContext ctx{f};
          ObservableOptions opt;
          opt.alpha = alpha;
          opt.p = p;
          PathObservables obs = path_observables(ctx, path, nullptr, opt);
          py::dict d;
          d["quadratic_variation"] = obs.quadratic_variation;
          d["qv_by_coord"] = obs.qv_by_coord;
          d["qv_below_alpha"] = obs.qv_below_alpha;
          d["integral_below_alpha"] = obs.integral_below_alpha;
          d["large_derivative_jump"] = obs.large_derivative_jump;
          d["running_max"] = obs.running_max;
          d["first_positive_time"] = obs.first_positive_time;
          d["first_positive_found"] = obs.first_positive_found;
          d["gradient_stop_time"] = obs.gradient_stop_time;
          d["gradient_stopped"] = obs.gradient_stopped;
          d["psi_max"] = obs.psi_max;
          d["end_value"] = obs.end_value;
          d["end_gradient_sq"] = obs.end_gradient_sq;
          return d;
        },
        py::arg("f"), py::arg("path"), py::arg("alpha") = 0.5,
        py::arg("p") = 0.5);

  m.def("mc_variance_via_qv",
        [](const CubeFunction& f, std::uint64_t n_paths, double eps,
           std::uint64_t seed, int workers) {
          return estimate_dict(
              mc_variance_via_qv(f, n_paths, eps, seed, workers));
        },
        py::arg("f"), py::arg("n_paths") = 100000, py::arg("eps") = 1e-6,
        py::arg("seed") = 42, py::arg("workers") = 1);

  m.def("mc_jump_integral_check",
        [](const CubeFunction& f, const std::string& g, int coord, double t1,
           double t2, std::uint64_t n_paths, double eps, std::uint64_t seed,
           int workers) {
          JumpTestFn fn = g == "one"             ? JumpTestFn::one
                          : g == "derivative_sq" ? JumpTestFn::derivative_sq
                          : g == "influence_sq"
                              ? JumpTestFn::influence_sq
                              : throw spec_error("unknown test function: " + g);
          JumpIntegralCheck chk = mc_jump_integral_check(
              f, fn, coord, t1, t2, n_paths, eps, seed, workers);
          py::dict d;
          d["lhs"] = estimate_dict(chk.lhs);
          d["rhs"] = chk.rhs;
          return d;
        },
        py::arg("f"), py::arg("g"), py::arg("coord"), py::arg("t1"),
        py::arg("t2"), py::arg("n_paths") = 100000, py::arg("eps") = 1e-6,
        py::arg("seed") = 42, py::arg("workers") = 1);

  m.def("estimate_gf",
        [](const CubeFunction& f, std::uint64_t n_paths, double eps,
           std::uint64_t seed, int workers) {
          GfEstimate g = estimate_gf(f, n_paths, eps, seed, workers);
          py::dict d;
          d["mean"] = g.mean;
          d["std_error"] = g.std_error;
          d["count"] = g.count;
          d["second_moment"] = g.second_moment();
          d["second_moment_se"] = g.second_moment_se();
          return d;
        },
        py::arg("f"), py::arg("n_paths"), py::arg("eps") = 1e-6,
        py::arg("seed") = 42, py::arg("workers") = 1);

  m.def("estimate_boundary_bound",
        [](const CubeFunction& f, double alpha, std::uint64_t n_paths,
           double eps, std::uint64_t seed, int workers) {
          BoundaryBound b =
              estimate_boundary_bound(f, alpha, n_paths, eps, seed, workers);
          py::dict d;
          d["alpha"] = b.alpha;
          d["p_large_jump"] = estimate_dict(b.p_large_jump);
          d["inner_mass"] = b.inner_mass;
          d["outer_mass"] = b.outer_mass;
          d["bound"] = b.bound();
          d["margin"] = b.margin();
          return d;
        },
        py::arg("f"), py::arg("alpha"), py::arg("n_paths") = 100000,
        py::arg("eps") = 1e-6, py::arg("seed") = 42, py::arg("workers") = 1);

  m.def("run_exact_checks",
        [](const std::string& spec) {
          VerifyConfig cfg;
          nlohmann::json rows = nlohmann::json::array();
          for (const auto& r : run_exact_checks(make_function(spec), spec, cfg))
            rows.push_back(r.to_json());
          return json_to_py(rows);
        },
        py::arg("spec"));

  m.def("run_corpus",
        [](const std::vector<std::string>& corpus, std::uint64_t seed,
           std::uint64_t n_paths, double eps, int workers) {
          VerifyConfig cfg;
          cfg.seed = seed;
          cfg.n_paths = n_paths;
          cfg.eps = eps;
          cfg.workers = workers;
          CorpusReport rep = run_corpus(corpus, cfg);
          nlohmann::json j;
          j["environment"] = rep.environment;
          j["checks"] = nlohmann::json::array();
          for (const auto& c : rep.checks) j["checks"].push_back(c.to_json());
          j["all_passed"] = rep.all_passed();
          return json_to_py(j);
        },
        py::arg("corpus"), py::arg("seed") = 42, py::arg("n_paths") = 20000,
        py::arg("eps") = 1e-6, py::arg("workers") = 1);
}
