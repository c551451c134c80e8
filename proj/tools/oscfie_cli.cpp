// oscfie command-line driver.
//
//   oscfie solve cm1|cm2        collocation solve of the benchmark problem
//   oscfie train sgl|mgdl       single- or multi-grade network training
//   oscfie sweep-kappa          one method over several wavenumbers and seeds
//   oscfie inv-norm-study       ||M^{-1}||_2 against kappa
//   oscfie bound-suite          measured values against the a-priori bounds
//   oscfie metrics              accuracy of a saved checkpoint
//
// Every subcommand accepts --config FILE (TOML/INI key = value pairs using the
// long option names); flags given on the command line take precedence.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "oscfie/bound_suite.hpp"
#include "oscfie/checkpoint.hpp"
#include "oscfie/experiment.hpp"
#include "oscfie/metrics.hpp"
#include "oscfie/version.hpp"

namespace fs = std::filesystem;
using namespace oscfie;

namespace {

// Experiment options shared by solve, train and sweep-kappa. Values start at
// the preset (or the library defaults) and only options that were actually
// given, on the command line or in the config file, override them.
struct ExperimentFlags {
  std::string preset;
  double lambda_re = 0.2, lambda_im = 0.0;
  double kappa = 100.0;
  int q = 1;
  double gamma = 6.0, beta = 1.0, Gamma = 2.0;
  int m = 2;
  std::uint64_t seed = 0;
  std::string validation = "midpoint";
  std::string out;
  int trace_points = 2001;
  bool decomposition = true;
  std::string hidden, grades;
  int epochs = 0, batch_size = 0;
  double mu = 0.0, lr0 = 0.0, lrF = 0.0;

  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> setters;

  void add(CLI::App* app, bool training) {
    auto opt = [&](const char* name, auto& var, const char* help, auto apply) {
      setters.emplace_back(app->add_option(name, var, help), apply);
    };
    app->add_option("--preset", preset, "Start from a preset: desk, desk20 or full");
    opt("--lambda", lambda_re, "Real part of lambda", [this](ExperimentConfig& c) { c.lambda.real(lambda_re); });
    opt("--lambda-imag", lambda_im, "Imaginary part of lambda",
        [this](ExperimentConfig& c) { c.lambda.imag(lambda_im); });
    opt("--kappa", kappa, "Wavenumber", [this](ExperimentConfig& c) { c.kappa = kappa; });
    opt("--q", q, "Collocation refinement (N = q p + 1)", [this](ExperimentConfig& c) { c.q = q; });
    opt("--gamma", gamma, "Quadrature factor gamma", [this](ExperimentConfig& c) { c.gamma = gamma; });
    opt("--beta", beta, "Quadrature exponent beta", [this](ExperimentConfig& c) { c.beta = beta; });
    opt("--Gamma", Gamma, "Relaxation factor", [this](ExperimentConfig& c) { c.Gamma = Gamma; });
    opt("--m", m, "Smoothness order for the quadrature bound", [this](ExperimentConfig& c) { c.m = m; });
    opt("--seed", seed, "Random seed", [this](ExperimentConfig& c) { c.seed = seed; });
    opt("--validation", validation, "midpoint or random:<seed>",
        [this](ExperimentConfig& c) { c.validation = validation; });
    opt("--out", out, "Output directory", [this](ExperimentConfig& c) { c.output_dir = out; });
    opt("--trace-points", trace_points, "Points in solution traces",
        [this](ExperimentConfig& c) { c.trace_points = trace_points; });
    opt("--decomposition", decomposition, "Check the error-decomposition inequality (true/false)",
        [this](ExperimentConfig& c) { c.check_decomposition = decomposition; });
    if (!training) return;
    opt("--hidden", hidden, "Single-grade hidden widths, e.g. 64,64",
        [this](ExperimentConfig& c) { c.hidden = parse_widths(hidden); });
    opt("--epochs", epochs, "Single-grade epochs", [this](ExperimentConfig& c) { c.train.epochs = epochs; });
    opt("--batch-size", batch_size, "Batch size (all grades)", [this](ExperimentConfig& c) {
      c.train.batch_size = batch_size;
      for (auto& g : c.grades) g.train.batch_size = batch_size;
    });
    opt("--mu", mu, "Regularization (all grades)", [this](ExperimentConfig& c) {
      c.train.mu = mu;
      for (auto& g : c.grades) g.train.mu = mu;
    });
    opt("--lr0", lr0, "Initial learning rate (all grades)", [this](ExperimentConfig& c) {
      c.train.lr0 = lr0;
      for (auto& g : c.grades) g.train.lr0 = lr0;
    });
    opt("--lrF", lrF, "Final learning rate (all grades)", [this](ExperimentConfig& c) {
      c.train.lrF = lrF;
      for (auto& g : c.grades) g.train.lrF = lrF;
    });
    // Grades come first so the per-grade overrides above still apply to them.
    setters.insert(setters.begin(),
                   {app->add_option("--grades", grades, "Grade spec, e.g. 64,64:200;32,32:400 (/ may replace ;)"),
                    [this](ExperimentConfig& c) { c.grades = parse_grade_spec(grades, c.train); }});
  }

  ExperimentConfig build(Method method) const {
    ExperimentConfig c;
    if (!preset.empty()) c = oscfie::preset(preset, method);
    c.method = method;
    for (const auto& [option, apply] : setters)
      if (option->count() > 0) apply(c);
    return c;
  }
};

void print_result(const ExperimentResult& r) {
  write_metrics_header(std::cout);
  write_metrics_row(std::cout, r.metrics);
  for (const auto& g : r.grades)
    std::cout << "grade " << g.grade << ": residual_norm=" << g.residual_norm << " relative_L2=" << g.relative_L2
              << " band_error=" << g.band_error << '\n';
  if (r.decomposition)
    std::cout << "decomposition: lhs=" << r.decomposition->lhs << " rhs=" << r.decomposition->rhs
              << (r.decomposition->holds ? " holds" : " VIOLATED") << '\n';
  for (const auto& s : r.stages)
    if (!s.ok) std::cerr << "stage " << s.name << " failed: " << s.error << '\n';
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillatory Fredholm integral equation solver and experiment harness"};
  app.set_version_flag("--version", std::string("oscfie ") + kVersion);
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Collocation solve (cm1 or cm2)");
  solve->set_config("--config");
  std::string solve_method;
  solve->add_option("method", solve_method, "cm1 or cm2")->required()->check(CLI::IsMember({"cm1", "cm2"}));
  ExperimentFlags solve_flags;
  solve_flags.add(solve, false);

  // train
  auto* train = app.add_subcommand("train", "Network training (sgl or mgdl)");
  train->set_config("--config");
  std::string train_method;
  train->add_option("method", train_method, "sgl or mgdl")->required()->check(CLI::IsMember({"sgl", "mgdl"}));
  ExperimentFlags train_flags;
  train_flags.add(train, true);

  // sweep-kappa
  auto* sweep = app.add_subcommand("sweep-kappa", "Run one method over several kappas and seeds");
  sweep->set_config("--config");
  std::string sweep_method = "cm1", sweep_kappas = "100,150,200", sweep_seeds = "0";
  sweep->add_option("--method", sweep_method, "cm1, cm2, sgl or mgdl");
  sweep->add_option("--kappas", sweep_kappas, "Comma-separated wavenumbers");
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds");
  ExperimentFlags sweep_flags;
  sweep_flags.add(sweep, true);

  // inv-norm-study
  auto* study = app.add_subcommand("inv-norm-study", "||M^{-1}||_2 over a kappa range");
  study->set_config("--config");
  double study_lambda = 1.0, study_gamma = 6.0, study_beta = 1.0;
  double kmin = 10.0, kmax = 600.0, kstep = 20.0;
  int study_q = 1;
  std::string study_out;
  study->add_option("--lambda", study_lambda, "Real lambda");
  study->add_option("--gamma", study_gamma, "Quadrature factor gamma");
  study->add_option("--beta", study_beta, "Quadrature exponent beta");
  study->add_option("--q", study_q, "Collocation refinement");
  study->add_option("--kappa-min", kmin, "First kappa");
  study->add_option("--kappa-max", kmax, "Last kappa (inclusive)");
  study->add_option("--kappa-step", kstep, "Kappa increment")->check(CLI::PositiveNumber);
  study->add_option("--out", study_out, "CSV file (stdout when omitted)");

  // bound-suite
  auto* bounds = app.add_subcommand("bound-suite", "Check the a-priori bounds");
  bounds->set_config("--config");
  std::string bounds_out;
  bounds->add_option("--out", bounds_out, "CSV file (stdout when omitted)");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Accuracy of a saved network or grade stack");
  metrics->set_config("--config");
  std::string ckpt, metrics_out;
  double metrics_kappa = 100.0;
  metrics->add_option("--checkpoint", ckpt, "network.ckpt or stack.ckpt")->required()->check(CLI::ExistingFile);
  metrics->add_option("--kappa", metrics_kappa, "Wavenumber of the benchmark solution");
  metrics->add_option("--out", metrics_out, "Directory for the FFT error trace");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve || *train) {
      const bool is_solve = solve->parsed();
      const auto& flags = is_solve ? solve_flags : train_flags;
      const auto config = flags.build(parse_method(is_solve ? solve_method : train_method));
      const auto result = run_experiment(config);
      print_result(result);
      return result.ok ? 0 : 1;
    }

    if (*sweep) {
      bool ok = true;
      const auto base = sweep_flags.build(parse_method(sweep_method));
      std::ostringstream table;
      write_metrics_header(table);
      for (double kappa : parse_reals(sweep_kappas)) {
        for (double seed : parse_reals(sweep_seeds)) {
          auto config = base;
          config.kappa = kappa;
          config.seed = static_cast<std::uint64_t>(seed);
          if (!base.output_dir.empty()) {
            std::ostringstream sub;
            sub << "kappa_" << kappa << "_seed_" << config.seed;
            config.output_dir = (fs::path(base.output_dir) / sub.str()).string();
          }
          const auto result = run_experiment(config);
          write_metrics_row(table, result.metrics);
          for (const auto& s : result.stages)
            if (!s.ok) std::cerr << "kappa=" << kappa << " seed=" << config.seed << ": stage " << s.name
                                 << " failed: " << s.error << '\n';
          ok = ok && result.ok;
        }
      }
      std::cout << table.str();
      if (!base.output_dir.empty()) {
        fs::create_directories(base.output_dir);
        std::ofstream(fs::path(base.output_dir) / "metrics.csv") << table.str();
      }
      return ok ? 0 : 1;
    }

    if (*study) {
      std::vector<double> kappas;
      for (double k = kmin; k <= kmax + 1e-9 * kmax; k += kstep) kappas.push_back(k);
      const auto records = inv_norm_sweep(cplx(study_lambda, 0.0), study_gamma, study_beta, study_q, kappas);
      if (study_out.empty()) {
        write_inv_norm_csv(std::cout, records);
      } else {
        std::ofstream os(study_out);
        write_inv_norm_csv(os, records);
      }
      return 0;
    }

    if (*bounds) {
      const auto report = bound_suite();
      if (bounds_out.empty()) {
        write_bound_csv(std::cout, report);
      } else {
        std::ofstream os(bounds_out);
        write_bound_csv(os, report);
      }
      for (const auto& c : report.cases)
        if (!c.pass) std::cerr << "bound violated: " << c.suite << ' ' << c.label << ' ' << c.measured << " > "
                               << c.bound << '\n';
      return report.all_pass() ? 0 : 1;
    }

    if (*metrics) {
      std::ifstream is(ckpt);
      std::string tag;
      is >> tag;
      is.seekg(0);
      BatchEvaluator Y;
      if (tag == "oscfie-gradestack") {
        auto stack = load_stack(is);
        Y = [stack](const std::vector<double>& pts) { return compose_solution(stack, pts); };
      } else {
        auto net = load_network(is);
        Y = [net](const std::vector<double>& pts) { return CVector(complexify(evaluate(net, as_batch(pts)))); };
      }
      const auto solution = benchmark_solution(metrics_kappa);
      const CVector on_grid = Y(metric_grid());
      const std::span<const cplx> values(on_grid.data(), on_grid.size());
      const auto curve = fft_relative_error(values, solution);
      std::cout.precision(17);
      std::cout << "relative_L2," << relative_L2_error(values, solution) << '\n'
                << "band_error," << band_mean_error(curve, kappa_band(metrics_kappa)) << '\n';
      if (!metrics_out.empty()) {
        fs::create_directories(metrics_out);
        std::ofstream os(fs::path(metrics_out) / "fft_rel_error.csv");
        os.precision(17);
        os << "z,rel_err\n";
        for (std::size_t j = 0; j < curve.z.size(); ++j)
          if (!curve.flagged[j]) os << curve.z[j] << ',' << curve.rel_err[j] << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
