#pragma once

// End-to-end runs on the benchmark problem: data generation, solving or
// training, metrics, the error-decomposition check and CSV/JSON artifacts.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oscfie/discrete_system.hpp"
#include "oscfie/mgdl_trainer.hpp"
#include "oscfie/sgl_trainer.hpp"

namespace oscfie {

enum class Method { cm1, cm2, sgl, mgdl };

/// Throws std::invalid_argument for unknown names.
Method parse_method(const std::string& name);
std::string method_name(Method method);

/// "64,64,32" -> {64, 64, 32}.
std::vector<int> parse_widths(const std::string& text);
/// "64,64:200;32,32:400" -> two grades with the given widths and epochs; the
/// remaining TrainConfig fields are copied from base. '/' may replace ';'.
GradeSpec parse_grade_spec(const std::string& text, const TrainConfig& base);
std::string format_grade_spec(const GradeSpec& spec);

struct ExperimentConfig {
  Method method = Method::cm1;
  cplx lambda{0.2, 0.0};
  double kappa = 100.0;
  int q = 1;
  double gamma = 6.0;
  double beta = 1.0;
  double Gamma = 2.0;
  int m = 2;
  std::vector<int> hidden{64, 64};  ///< single-grade hidden widths
  TrainConfig train;                ///< single-grade settings; seed is taken from `seed`
  GradeSpec grades;                 ///< multi-grade settings
  std::uint64_t seed = 0;
  std::string validation = "midpoint";  ///< or "random:<seed>"
  std::string output_dir;               ///< no artifacts when empty
  int trace_points = 2001;
  bool check_decomposition = true;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Named presets: "desk" (kappa = 50), "desk20" (kappa = 20) and "full"
/// (kappa = 100, paper-scale networks and epochs; long running).
ExperimentConfig preset(const std::string& name, Method method);

struct TrainingData {
  std::vector<double> x;
  CVector f;
};

/// x_j = -1 + 2j/(N-1) with f from the closed-form right-hand side.
TrainingData gen_training_grid(const SystemParams& params, std::span<const PolyExpTerm> solution, cplx lambda);

/// 512 points: midpoints -1 + 2(j - 1/2)/512 for mode "midpoint", sorted
/// uniform draws for "random:<seed>". Throws std::invalid_argument otherwise.
ValidationSet gen_validation_grid(std::span<const PolyExpTerm> solution, cplx lambda, double kappa,
                                  const std::string& mode = "midpoint");

struct MetricsRecord {
  std::string method;
  double kappa = 0.0;
  long N = 0;
  double relative_L2 = 0.0;
  double train_loss = 0.0;  ///< NaN for collocation
  double val_loss = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

void write_metrics_header(std::ostream& os);
void write_metrics_row(std::ostream& os, const MetricsRecord& record);

/// || y - Y ||_N <= inv_norm(M) (|| e ||_N + |lambda| sup |K y - K_p y|) with
/// e = v_f - M v_Y and the sup taken over the collocation nodes and 201 probes.
struct DecompositionCheck {
  double lhs = 0.0;
  double inv_norm = 0.0;
  double residual_norm = 0.0;
  double quad_error = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

using BatchEvaluator = std::function<CVector(const std::vector<double>&)>;

DecompositionCheck check_decomposition(const BatchEvaluator& Y, const SystemMatrix& M, const CVector& v_f,
                                       std::span<const PolyExpTerm> solution, double Gamma, int m,
                                       double slack = 1e-9);

struct GradeMetrics {
  int grade = 0;              ///< 1-based
  double residual_norm = 0.0; ///< ||e_l||_N
  double relative_L2 = 0.0;   ///< composition of grades 1..l
  double band_error = 0.0;    ///< FFT band error of that composition
};

struct StageStatus {
  std::string name;
  bool ok = true;
  std::string error;
};

struct ExperimentResult {
  MetricsRecord metrics;
  double band_error = 0.0;  ///< mean FFT relative error in the kappa band
  std::optional<DecompositionCheck> decomposition;
  std::vector<GradeMetrics> grades;
  std::vector<TrainRecord> histories;  ///< one per trained network (grade)
  std::vector<int> best_val_epochs;
  std::vector<StageStatus> stages;
  bool ok = true;
};

/// Runs one experiment. Stage failures are recorded instead of thrown; when
/// output_dir is set the artifacts and manifest.json are written there.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace oscfie
