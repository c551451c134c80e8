#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "oscfie/bound_suite.hpp"
#include "oscfie/checkpoint.hpp"
#include "oscfie/collocation.hpp"
#include "oscfie/delta_sequence.hpp"
#include "oscfie/discrete_system.hpp"
#include "oscfie/experiment.hpp"
#include "oscfie/metrics.hpp"
#include "oscfie/quadrature.hpp"
#include "oscfie/version.hpp"

namespace py = pybind11;
using namespace oscfie;

namespace {

CVector sample(const PolyExpSum& terms, const std::vector<double>& points) {
  CVector out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = evaluate(terms, points[j]);
  return out;
}

py::dict metrics_dict(const MetricsRecord& r) {
  py::dict d;
  d["method"] = r.method;
  d["kappa"] = r.kappa;
  d["N"] = r.N;
  d["relative_L2"] = r.relative_L2;
  d["train_loss"] = r.train_loss;
  d["val_loss"] = r.val_loss;
  d["wall_seconds"] = r.wall_seconds;
  d["seed"] = r.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Oscillatory Fredholm integral equation solvers and network training.";
  m.attr("__version__") = kVersion;

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init(&SystemParams::make), py::arg("lam"), py::arg("kappa"), py::arg("gamma") = 6.0,
           py::arg("beta") = 1.0, py::arg("q") = 1)
      .def_readonly("lam", &SystemParams::lambda)
      .def_readonly("kappa", &SystemParams::kappa)
      .def_readonly("gamma", &SystemParams::gamma)
      .def_readonly("beta", &SystemParams::beta)
      .def_readonly("q", &SystemParams::q)
      .def_readonly("p", &SystemParams::p)
      .def_readonly("N", &SystemParams::N)
      .def("nodes", &SystemParams::nodes);

  m.def("p_kappa", &p_kappa, py::arg("gamma"), py::arg("beta"), py::arg("kappa"));
  m.def("system_matrix", [](const SystemParams& p) { return build_M(p).entries; },
        "Dense M = I - (lambda/p) B.");
  m.def("apply_discrete_operator",
        [](const CVector& v, const SystemParams& p) {
          return apply_discrete_operator(std::span<const cplx>(v.data(), v.size()), p);
        },
        py::arg("v"), py::arg("params"));
  m.def("inv_norm", [](const SystemParams& p) { return inv_norm(build_M(p)); }, "||M^{-1}||_2.");
  m.def("eta_bound", &eta_bound, py::arg("lam"), py::arg("q"), py::arg("gamma"), py::arg("Gamma") = 0.0);

  m.def("benchmark_solution", [](double kappa, const std::vector<double>& s) {
    return sample(benchmark_solution(kappa), s);
  }, py::arg("kappa"), py::arg("s"), "Exact benchmark solution y at the points s.");
  m.def("benchmark_rhs",
        [](cplx lambda, double kappa, const std::vector<double>& s) {
          const auto y = benchmark_solution(kappa);
          CVector out(static_cast<Eigen::Index>(s.size()));
          for (std::size_t j = 0; j < s.size(); ++j) out[j] = rhs_f(y, lambda, kappa, s[j]);
          return out;
        },
        py::arg("lam"), py::arg("kappa"), py::arg("s"), "f = y - lambda K y at the points s.");

  m.def("quad_error_bound", &quad_error_bound, py::arg("r"), py::arg("tau"), py::arg("Gamma"), py::arg("m"),
        py::arg("gamma"), py::arg("beta"), py::arg("kappa"));
  m.def("benchmark_quad_error",
        [](double kappa, long p) {
          return sup_quad_error(benchmark_oscillatory_sum(kappa, 2.0, 2), QuadratureSpec::with_panels(kappa, p),
                                default_probe_grid());
        },
        py::arg("kappa"), py::arg("p"), "sup |K y - K_p y| over 201 probes for the benchmark solution.");

  m.def("delta_sequence", [](int L) {
    const auto s = delta_sequence(L);
    py::dict d;
    d["delta"] = s.delta;
    d["partial_sums"] = s.partial_sums;
    d["weighted_sum"] = s.weighted_sum;
    d["weighted_sum_exact"] = s.weighted_sum_exact;
    d["delta1_exact"] = s.delta1_exact;
    return d;
  }, py::arg("L"));

  m.def("collocation_error",
        [](int degree, cplx lambda, double kappa, int q) {
          const auto params = SystemParams::make(lambda, kappa, 6.0, 1.0, q);
          const auto y = benchmark_solution(kappa);
          std::vector<cplx> f(params.N);
          for (long j = 0; j < params.N; ++j) f[j] = rhs_f(y, lambda, kappa, params.node(j));
          const auto sol = solve_collocation(PiecewiseBasis::make(degree, params.N), lambda, kappa, f);
          return relative_L2_error([&](double t) { return eval_collocation(sol, t); }, y);
        },
        py::arg("degree"), py::arg("lam"), py::arg("kappa"), py::arg("q") = 1,
        "Relative L2 error of the piecewise-polynomial collocation solution.");

  m.def("metric_grid", &metric_grid, py::arg("panels") = kMetricPanels);
  m.def("relative_L2_error",
        [](const CVector& Y, double kappa) {
          return relative_L2_error(std::span<const cplx>(Y.data(), Y.size()), benchmark_solution(kappa),
                                   static_cast<int>(Y.size()) - 1);
        },
        py::arg("Y_on_grid"), py::arg("kappa"));

  m.def("run_experiment",
        [](const std::string& method, const std::string& preset_name, double kappa, std::uint64_t seed,
           const std::string& output_dir) {
          auto config = preset_name.empty() ? ExperimentConfig{} : preset(preset_name, parse_method(method));
          config.method = parse_method(method);
          if (kappa > 0.0) config.kappa = kappa;
          config.seed = seed;
          config.output_dir = output_dir;
          ExperimentResult r;
          {
            py::gil_scoped_release release;
            r = run_experiment(config);
          }
          py::dict d = metrics_dict(r.metrics);
          d["ok"] = r.ok;
          d["band_error"] = r.band_error;
          py::list grades;
          for (const auto& g : r.grades) {
            py::dict gd;
            gd["grade"] = g.grade;
            gd["residual_norm"] = g.residual_norm;
            gd["relative_L2"] = g.relative_L2;
            gd["band_error"] = g.band_error;
            grades.append(gd);
          }
          d["grades"] = grades;
          if (r.decomposition) d["decomposition_holds"] = r.decomposition->holds;
          return d;
        },
        py::arg("method"), py::arg("preset") = "", py::arg("kappa") = 0.0, py::arg("seed") = 0,
        py::arg("output_dir") = "",
        "Runs one experiment (cm1, cm2, sgl, mgdl) and returns its metrics.");

  m.def("evaluate_checkpoint",
        [](const std::string& path, const std::vector<double>& s) -> CVector {
          std::ifstream is(path);
          std::string tag;
          is >> tag;
          if (tag == "oscfie-gradestack") return compose_solution(load_stack_file(path), s);
          return complexify(evaluate(load_network_file(path), as_batch(s)));
        },
        py::arg("path"), py::arg("s"), "Evaluates a saved network or grade stack at the points s.");

  m.def("bound_suite_passes", [] { return bound_suite().all_pass(); });
}
