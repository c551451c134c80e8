#include "oscfie/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "oscfie/checkpoint.hpp"
#include "oscfie/collocation.hpp"
#include "oscfie/metrics.hpp"
#include "oscfie/quadrature.hpp"
#include "oscfie/version.hpp"

namespace oscfie {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kValidationPoints = 512;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> linspace(int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out[j] = count == 1 ? 0.0 : -1.0 + 2.0 * j / (count - 1);
  return out;
}

CVector sample(std::span<const PolyExpTerm> terms, const std::vector<double>& points) {
  CVector out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = evaluate(terms, points[j]);
  return out;
}

void write_trace(const fs::path& path, const std::vector<double>& s, const CVector& values) {
  std::ofstream os(path);
  os.precision(17);
  os << "s,re,im\n";
  for (std::size_t j = 0; j < s.size(); ++j) os << s[j] << ',' << values[j].real() << ',' << values[j].imag() << '\n';
}

void write_fft_trace(const fs::path& path, const FftErrorCurve& curve) {
  std::ofstream os(path);
  os.precision(17);
  os << "z,rel_err\n";
  for (std::size_t j = 0; j < curve.z.size(); ++j)
    if (!curve.flagged[j]) os << curve.z[j] << ',' << curve.rel_err[j] << '\n';
}

json train_json(const TrainConfig& t) {
  return {{"epochs", t.epochs}, {"batch_size", t.batch_size}, {"mu", t.mu},   {"lr0", t.lr0},
          {"lrF", t.lrF},       {"adam_beta1", t.adam_beta1}, {"adam_beta2", t.adam_beta2}, {"adam_eps", t.adam_eps}};
}

json config_json(const ExperimentConfig& c) {
  json j = {{"method", method_name(c.method)},
            {"lambda", {c.lambda.real(), c.lambda.imag()}},
            {"kappa", c.kappa},
            {"q", c.q},
            {"gamma", c.gamma},
            {"beta", c.beta},
            {"Gamma", c.Gamma},
            {"m", c.m},
            {"seed", c.seed},
            {"validation", c.validation},
            {"trace_points", c.trace_points},
            {"check_decomposition", c.check_decomposition}};
  if (c.method == Method::sgl) {
    j["hidden"] = c.hidden;
    j["train"] = train_json(c.train);
  }
  if (c.method == Method::mgdl) {
    json grades = json::array();
    for (const auto& g : c.grades) grades.push_back({{"hidden", g.hidden}, {"train", train_json(g.train)}});
    j["grades"] = grades;
  }
  return j;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Runs fn as a named stage; returns false (and records the error) on failure.
template <typename Fn>
bool stage(ExperimentResult& result, const std::string& name, Fn&& fn) {
  StageStatus status{name, true, {}};
  try {
    fn();
  } catch (const std::exception& e) {
    status.ok = false;
    status.error = e.what();
    result.ok = false;
  }
  result.stages.push_back(status);
  return status.ok;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "cm1") return Method::cm1;
  if (name == "cm2") return Method::cm2;
  if (name == "sgl") return Method::sgl;
  if (name == "mgdl") return Method::mgdl;
  throw std::invalid_argument("unknown method '" + name + "' (expected cm1, cm2, sgl or mgdl)");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::cm1: return "cm1";
    case Method::cm2: return "cm2";
    case Method::sgl: return "sgl";
    case Method::mgdl: return "mgdl";
  }
  return "?";
}

std::vector<int> parse_widths(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    std::size_t used = 0;
    int w = 0;
    try {
      w = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || w < 1) throw std::invalid_argument("bad layer width '" + item + "'");
    out.push_back(w);
  }
  if (out.empty()) throw std::invalid_argument("empty width list");
  return out;
}

GradeSpec parse_grade_spec(const std::string& text, const TrainConfig& base) {
  GradeSpec spec;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), '/', ';');
  for (const auto& grade : split(normalized, ';')) {
    const auto parts = split(grade, ':');
    if (parts.size() != 2) throw std::invalid_argument("grade '" + grade + "' must look like widths:epochs");
    GradeConfig g;
    g.hidden = parse_widths(parts[0]);
    g.train = base;
    try {
      g.train.epochs = std::stoi(parts[1]);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad epoch count in grade '" + grade + "'");
    }
    spec.push_back(std::move(g));
  }
  validate_grade_spec(spec);
  return spec;
}

std::string format_grade_spec(const GradeSpec& spec) {
  std::ostringstream os;
  for (std::size_t g = 0; g < spec.size(); ++g) {
    if (g) os << ';';
    for (std::size_t j = 0; j < spec[g].hidden.size(); ++j) os << (j ? "," : "") << spec[g].hidden[j];
    os << ':' << spec[g].train.epochs;
  }
  return os.str();
}

void ExperimentConfig::validate() const {
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (trace_points < 2) throw std::invalid_argument("trace_points must be >= 2");
  if (method == Method::cm2) {
    const auto params = SystemParams::make(lambda, kappa, gamma, beta, q);
    if ((params.N - 1) % 2 != 0) throw std::invalid_argument("cm2 needs N - 1 even");
  }
  if (method == Method::sgl) {
    if (hidden.empty()) throw std::invalid_argument("sgl needs at least one hidden layer");
    for (int w : hidden)
      if (w < 1) throw std::invalid_argument("hidden widths must be >= 1");
    train.validate();
  }
  if (method == Method::mgdl) validate_grade_spec(grades);
}

ExperimentConfig preset(const std::string& name, Method method) {
  ExperimentConfig c;
  c.method = method;
  if (name == "desk" || name == "desk20") {
    c.kappa = name == "desk" ? 50.0 : 20.0;
    c.train.batch_size = 64;
    c.train.mu = 0.0;
    // Slower decay than the full preset: at lrF = 1e-7 and these epoch counts
    // the first grade stalls before it fits anything.
    c.train.lrF = 1e-4;
    c.hidden = {64, 64, 32, 32, 16, 16, 8, 8};
    c.train.epochs = 1400;
    TrainConfig grade = c.train;
    c.grades = {{{64, 64}, grade}, {{32, 32}, grade}, {{16, 16, 8, 8}, grade}};
    c.grades[0].train.epochs = 200;
    c.grades[1].train.epochs = 400;
    c.grades[2].train.epochs = 800;
  } else if (name == "full") {
    c.kappa = 100.0;
    c.hidden = {256, 256, 128, 128, 64, 64, 32, 32};
    c.train.epochs = 3500;
    c.train.batch_size = 128;
    c.train.mu = 1e-4;
    TrainConfig grade;
    grade.batch_size = 64;
    grade.mu = 1e-6;
    c.grades = {{{256, 256}, grade}, {{128, 128}, grade}, {{64, 64, 32, 32}, grade}};
    c.grades[0].train.epochs = 500;
    c.grades[1].train.epochs = 1000;
    c.grades[2].train.epochs = 2000;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (expected desk, desk20 or full)");
  }
  return c;
}

TrainingData gen_training_grid(const SystemParams& params, std::span<const PolyExpTerm> solution, cplx lambda) {
  TrainingData data;
  data.x = params.nodes();
  data.f.resize(params.N);
  for (long j = 0; j < params.N; ++j) data.f[j] = rhs_f(solution, lambda, params.kappa, data.x[j]);
  return data;
}

ValidationSet gen_validation_grid(std::span<const PolyExpTerm> solution, cplx lambda, double kappa,
                                  const std::string& mode) {
  ValidationSet v;
  v.points.resize(kValidationPoints);
  if (mode == "midpoint") {
    for (int j = 0; j < kValidationPoints; ++j) v.points[j] = -1.0 + 2.0 * (j + 0.5) / kValidationPoints;
  } else if (mode.rfind("random:", 0) == 0) {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(mode.substr(7));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad validation seed in '" + mode + "'");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (auto& x : v.points) x = uniform(rng);
    std::sort(v.points.begin(), v.points.end());
  } else {
    throw std::invalid_argument("validation mode must be 'midpoint' or 'random:<seed>'");
  }
  v.f.resize(kValidationPoints);
  for (int j = 0; j < kValidationPoints; ++j) v.f[j] = rhs_f(solution, lambda, kappa, v.points[j]);
  return v;
}

void write_metrics_header(std::ostream& os) {
  os << "method,kappa,N,relative_L2,train_loss,val_loss,wall_seconds,seed\n";
}

void write_metrics_row(std::ostream& os, const MetricsRecord& r) {
  const auto precision = os.precision(17);
  os << r.method << ',' << r.kappa << ',' << r.N << ',' << r.relative_L2 << ',' << r.train_loss << ','
     << r.val_loss << ',' << r.wall_seconds << ',' << r.seed << '\n';
  os.precision(precision);
}

DecompositionCheck check_decomposition(const BatchEvaluator& Y, const SystemMatrix& M, const CVector& v_f,
                                       std::span<const PolyExpTerm> solution, double Gamma, int m, double slack) {
  const auto& params = M.params;
  const auto nodes = params.nodes();
  const CVector v_Y = Y(nodes);
  const CVector v_y = sample(solution, nodes);

  auto probes = default_probe_grid();
  probes.insert(probes.end(), nodes.begin(), nodes.end());
  const auto chi = benchmark_oscillatory_sum(params.kappa, Gamma, m);

  DecompositionCheck c;
  c.lhs = seminorm(CVector(v_y - v_Y));
  c.residual_norm = seminorm(CVector(v_f - M.entries * v_Y));
  c.quad_error = sup_quad_error(chi, params.quadrature(), probes);
  c.inv_norm = inv_norm(M);
  c.rhs = c.inv_norm * (c.residual_norm + std::abs(params.lambda) * c.quad_error);
  c.holds = c.lhs <= c.rhs + slack;
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  const auto start = std::chrono::steady_clock::now();
  result.metrics.method = method_name(config.method);
  result.metrics.kappa = config.kappa;
  result.metrics.seed = config.seed;
  result.metrics.train_loss = kNaN;
  result.metrics.val_loss = kNaN;
  result.metrics.relative_L2 = kNaN;
  result.band_error = kNaN;

  SystemParams params;
  PolyExpSum solution;
  TrainingData data;
  ValidationSet validation;
  std::optional<SystemMatrix> M;
  BatchEvaluator Y;
  std::optional<SinMlp> net;
  std::optional<GradeStack> stack;

  bool ok = stage(result, "setup", [&] {
    config.validate();
    params = SystemParams::make(config.lambda, config.kappa, config.gamma, config.beta, config.q);
    result.metrics.N = params.N;
    solution = benchmark_solution(config.kappa);
    data = gen_training_grid(params, solution, config.lambda);
    validation = gen_validation_grid(solution, config.lambda, config.kappa, config.validation);
  });

  if (ok && (config.method == Method::cm1 || config.method == Method::cm2)) {
    ok = stage(result, "solve", [&] {
      const auto basis = PiecewiseBasis::make(config.method == Method::cm1 ? 1 : 2, params.N);
      auto sol = std::make_shared<CollocationSolution>(
          solve_collocation(basis, config.lambda, config.kappa, std::span<const cplx>(data.f.data(), data.f.size())));
      Y = [sol](const std::vector<double>& pts) {
        CVector out(static_cast<Eigen::Index>(pts.size()));
        for (std::size_t j = 0; j < pts.size(); ++j) out[j] = eval_collocation(*sol, pts[j]);
        return out;
      };
      const auto quad = params.quadrature().nodes();
      const CVector at_points = Y(validation.points);
      const CVector at_quad = Y(quad);
      result.metrics.val_loss = validation_loss(
          std::span<const cplx>(at_points.data(), at_points.size()), std::span<const cplx>(at_quad.data(), at_quad.size()),
          params, validation.points, std::span<const cplx>(validation.f.data(), validation.f.size()));
    });
  }

  if (ok && config.method == Method::sgl) {
    ok = stage(result, "train", [&] {
      M = build_M(params);
      std::vector<int> dims{1};
      dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
      dims.push_back(2);
      TrainConfig train = config.train;
      train.seed = config.seed;
      auto trained = train_single_grade(init_he(dims, config.seed), as_batch(data.x), *M, data.f, train,
                                        make_validator(params, validation));
      result.metrics.train_loss = trained.history.back().train_loss;
      result.metrics.val_loss = trained.history.back().val_loss;
      result.best_val_epochs.push_back(trained.best_val_epoch);
      result.histories.push_back(std::move(trained.history));
      net = std::move(trained.net);
      Y = [n = *net](const std::vector<double>& pts) { return CVector(complexify(evaluate(n, as_batch(pts)))); };
    });
  }

  if (ok && config.method == Method::mgdl) {
    ok = stage(result, "train", [&] {
      M = build_M(params);
      auto trained = train_mgdl(config.grades, *M, data.f, config.seed, &validation);
      for (auto& g : trained.grades) {
        result.best_val_epochs.push_back(g.best_val_epoch);
        result.histories.push_back(std::move(g.history));
      }
      result.metrics.train_loss = result.histories.back().back().train_loss;
      result.metrics.val_loss = result.histories.back().back().val_loss;
      stack = std::move(trained.stack);
      Y = [s = *stack](const std::vector<double>& pts) { return compose_solution(s, pts); };
    });
  }

  const auto grid = metric_grid();
  const auto band = kappa_band(config.kappa);
  if (ok) {
    ok = stage(result, "metrics", [&] {
      const CVector on_grid = Y(grid);
      const std::span<const cplx> values(on_grid.data(), on_grid.size());
      result.metrics.relative_L2 = relative_L2_error(values, solution);
      result.band_error = band_mean_error(fft_relative_error(values, solution), band);
      if (stack) {
        for (int l = 1; l <= stack->size(); ++l) {
          const CVector partial = compose_partial(*stack, grid, l);
          const std::span<const cplx> pv(partial.data(), partial.size());
          result.grades.push_back({l, seminorm(stack->residuals[l]), relative_L2_error(pv, solution),
                                   band_mean_error(fft_relative_error(pv, solution), band)});
        }
      }
    });
  }

  if (ok && config.check_decomposition) {
    ok = stage(result, "decomposition", [&] {
      if (!M) M = build_M(params);
      const auto check = check_decomposition(Y, *M, data.f, solution, config.Gamma, config.m);
      result.decomposition = check;
      if (!check.holds) {
        std::ostringstream msg;
        msg << "error decomposition violated: " << check.lhs << " > " << check.rhs;
        throw std::runtime_error(msg.str());
      }
    });
  }

  result.metrics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (config.output_dir.empty()) return result;

  stage(result, "artifacts", [&] {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir / "traces");
    {
      std::ofstream os(dir / "metrics.csv");
      write_metrics_header(os);
      write_metrics_row(os, result.metrics);
    }
    if (!result.histories.empty()) {
      std::ofstream os(dir / "history.csv");
      write_history_csv(os, result.histories.back());
      for (std::size_t g = 0; result.histories.size() > 1 && g < result.histories.size(); ++g) {
        std::ofstream gs(dir / ("history_grade" + std::to_string(g + 1) + ".csv"));
        write_history_csv(gs, result.histories[g]);
      }
    }
    if (net) save_network_file((dir / "network.ckpt").string(), *net);
    if (stack) save_stack_file((dir / "stack.ckpt").string(), *stack);
    if (Y) {
      const auto s = linspace(config.trace_points);
      const CVector exact = sample(solution, s);
      const CVector approx = Y(s);
      write_trace(dir / "traces" / "exact.csv", s, exact);
      write_trace(dir / "traces" / "solution.csv", s, approx);
      write_trace(dir / "traces" / "error.csv", s, CVector(approx - exact));
      const CVector on_grid = Y(grid);
      write_fft_trace(dir / "traces" / "fft_rel_error.csv",
                      fft_relative_error(std::span<const cplx>(on_grid.data(), on_grid.size()), solution));
      if (stack) {
        const auto components = grade_components(*stack, s);
        for (std::size_t l = 0; l < components.size(); ++l) {
          write_trace(dir / "traces" / ("grade" + std::to_string(l + 1) + ".csv"), s, components[l]);
          const CVector partial = compose_partial(*stack, grid, static_cast<int>(l) + 1);
          write_fft_trace(dir / "traces" / ("fft_rel_error_grade" + std::to_string(l + 1) + ".csv"),
                          fft_relative_error(std::span<const cplx>(partial.data(), partial.size()), solution));
        }
      }
    }
  });

  json manifest;
  manifest["config"] = config_json(config);
  manifest["seed"] = config.seed;
  manifest["versions"] = {{"oscfie", kVersion},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)},
                          {"compiler", __VERSION__}};
  json stages = json::array();
  for (const auto& s : result.stages) stages.push_back({{"name", s.name}, {"ok", s.ok}, {"error", s.error}});
  manifest["stages"] = stages;
  manifest["ok"] = result.ok;
  manifest["metrics"] = {{"method", result.metrics.method},
                         {"kappa", result.metrics.kappa},
                         {"N", result.metrics.N},
                         {"relative_L2", number_or_null(result.metrics.relative_L2)},
                         {"train_loss", number_or_null(result.metrics.train_loss)},
                         {"val_loss", number_or_null(result.metrics.val_loss)},
                         {"band_error", number_or_null(result.band_error)},
                         {"wall_seconds", result.metrics.wall_seconds}};
  if (result.decomposition) {
    const auto& d = *result.decomposition;
    manifest["decomposition"] = {{"lhs", d.lhs},       {"inv_norm", d.inv_norm}, {"residual_norm", d.residual_norm},
                                 {"quad_error", d.quad_error}, {"rhs", d.rhs}, {"holds", d.holds}};
  }
  if (!result.grades.empty()) {
    json grades = json::array();
    for (const auto& g : result.grades)
      grades.push_back({{"grade", g.grade},
                        {"residual_norm", g.residual_norm},
                        {"relative_L2", g.relative_L2},
                        {"band_error", number_or_null(g.band_error)}});
    manifest["grades"] = grades;
  }
  manifest["best_val_epochs"] = result.best_val_epochs;
  try {
    fs::create_directories(config.output_dir);
    std::ofstream os(fs::path(config.output_dir) / "manifest.json");
    os << manifest.dump(2) << '\n';
  } catch (const std::exception& e) {
    result.ok = false;
    result.stages.push_back({"manifest", false, e.what()});
  }
  return result;
}

}  // namespace oscfie
