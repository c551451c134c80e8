#pragma once

// Multi-grade training. Grade l+1 is a fresh sin network whose input is the
// frozen feature map of grade l; it is trained against the residual left by
// grades 1..l, and the solution is the sum of the complexified grade heads.

#include <vector>

#include "oscfie/sgl_trainer.hpp"

namespace oscfie {

struct GradeConfig {
  std::vector<int> hidden;  ///< trainable hidden widths of this grade
  TrainConfig train;
};

using GradeSpec = std::vector<GradeConfig>;

/// Throws std::invalid_argument if any grade has no hidden layer.
void validate_grade_spec(const GradeSpec& spec);

struct GradeStack {
  std::vector<SinMlp> grades;         ///< frozen grade networks, grade 1 first
  std::vector<CVector> residuals;     ///< residuals[0] = v_f, residuals[l] after grade l
  std::vector<CVector> components;    ///< T f_l at the collocation nodes
  Eigen::MatrixXd node_features;      ///< feature of the top grade at the nodes (nodes themselves when empty)

  int size() const { return static_cast<int>(grades.size()); }
  /// Input dimension the next grade must accept.
  int feature_dim() const { return static_cast<int>(node_features.rows()); }
  const CVector& residual() const { return residuals.back(); }
};

/// Empty stack for the collocation nodes of params with v_f as the first residual.
GradeStack make_stack(const SystemParams& params, const CVector& v_f);

/// Feature map of the top grade (the input of the next grade) at arbitrary points.
Eigen::MatrixXd stack_features(const GradeStack& stack, const std::vector<double>& points);

/// Trains grade_net against stack.residual(), freezes it and appends it.
/// The residual update is r_l = r_{l-1} - M v_{T f_l}. Throws
/// std::invalid_argument on an input-dimension or node-count mismatch and
/// DivergenceError on a non-finite loss.
TrainResult train_grade(GradeStack& stack, SinMlp grade_net, const SystemMatrix& M, const TrainConfig& config,
                        const ValidationFn& validate = {});

/// Validation closure for the next grade: Y = (grades so far) + T net(features).
ValidationFn make_grade_validator(const GradeStack& stack, const SystemParams& params,
                                  const ValidationSet& validation);

/// sum_l T f_l(t). Throws std::logic_error on an empty stack.
cplx compose_solution(const GradeStack& stack, double t);
CVector compose_solution(const GradeStack& stack, const std::vector<double>& points);
/// Composition of the first `grades` grades only.
CVector compose_partial(const GradeStack& stack, const std::vector<double>& points, int grades);

/// T f_l sampled on grid, one trace per grade.
std::vector<CVector> grade_components(const GradeStack& stack, const std::vector<double>& grid);

struct MgdlResult {
  GradeStack stack;
  std::vector<TrainResult> grades;
};

/// Trains every grade of spec in order. Grade l (0-based) is initialized and
/// shuffled with seed + l (overriding spec[l].train.seed) and trained with its
/// own Adam state and schedule.
MgdlResult train_mgdl(const GradeSpec& spec, const SystemMatrix& M, const CVector& v_f, std::uint64_t seed,
                      const ValidationSet* validation = nullptr);

}  // namespace oscfie
