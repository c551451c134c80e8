#include "oscfie/mgdl_trainer.hpp"

#include <sstream>
#include <stdexcept>

namespace oscfie {

void validate_grade_spec(const GradeSpec& spec) {
  if (spec.empty()) throw std::invalid_argument("GradeSpec: no grades");
  for (std::size_t g = 0; g < spec.size(); ++g) {
    if (spec[g].hidden.empty()) throw std::invalid_argument("GradeSpec: every grade needs a hidden layer");
    for (int w : spec[g].hidden)
      if (w < 1) throw std::invalid_argument("GradeSpec: hidden widths must be >= 1");
    spec[g].train.validate();
  }
}

GradeStack make_stack(const SystemParams& params, const CVector& v_f) {
  if (v_f.size() != params.N) throw std::invalid_argument("make_stack: v_f length must equal N");
  GradeStack stack;
  stack.residuals.push_back(v_f);
  stack.node_features = as_batch(params.nodes());
  return stack;
}

Eigen::MatrixXd stack_features(const GradeStack& stack, const std::vector<double>& points) {
  Eigen::MatrixXd a = as_batch(points);
  for (const auto& net : stack.grades) a = feature(net, a);
  return a;
}

TrainResult train_grade(GradeStack& stack, SinMlp grade_net, const SystemMatrix& M, const TrainConfig& config,
                        const ValidationFn& validate) {
  if (grade_net.input_dim() != stack.feature_dim()) {
    std::ostringstream msg;
    msg << "train_grade: grade input dimension " << grade_net.input_dim() << " != feature dimension "
        << stack.feature_dim();
    throw std::invalid_argument(msg.str());
  }
  if (stack.node_features.cols() != M.size()) throw std::invalid_argument("train_grade: node count mismatch");

  for (auto& layer : grade_net.layers) layer.trainable = true;
  TrainResult result = train_single_grade(std::move(grade_net), stack.node_features, M, stack.residual(), config,
                                          validate);

  SinMlp frozen = result.net;
  frozen.freeze();
  const CVector component = complexify(evaluate(frozen, stack.node_features));
  CVector next_residual = stack.residual() - M.entries * component;
  stack.node_features = feature(frozen, stack.node_features);
  stack.components.push_back(component);
  stack.residuals.push_back(std::move(next_residual));
  stack.grades.push_back(std::move(frozen));
  return result;
}

ValidationFn make_grade_validator(const GradeStack& stack, const SystemParams& params,
                                  const ValidationSet& validation) {
  const auto quad_points = params.quadrature().nodes();
  CVector base_points = CVector::Zero(static_cast<Eigen::Index>(validation.points.size()));
  CVector base_quad = CVector::Zero(static_cast<Eigen::Index>(quad_points.size()));
  if (stack.size() > 0) {
    base_points = compose_solution(stack, validation.points);
    base_quad = compose_solution(stack, quad_points);
  }
  Eigen::MatrixXd point_inputs = stack_features(stack, validation.points);
  Eigen::MatrixXd quad_inputs = stack_features(stack, quad_points);
  std::vector<cplx> f(validation.f.data(), validation.f.data() + validation.f.size());
  return [params, points = validation.points, f = std::move(f), point_inputs = std::move(point_inputs),
          quad_inputs = std::move(quad_inputs), base_points = std::move(base_points),
          base_quad = std::move(base_quad)](const SinMlp& net) {
    const CVector at_points = base_points + complexify(evaluate(net, point_inputs));
    const CVector at_quad = base_quad + complexify(evaluate(net, quad_inputs));
    return validation_loss(std::span<const cplx>(at_points.data(), at_points.size()),
                           std::span<const cplx>(at_quad.data(), at_quad.size()), params, points, f);
  };
}

CVector compose_partial(const GradeStack& stack, const std::vector<double>& points, int grades) {
  if (grades < 1 || grades > stack.size()) throw std::logic_error("compose_partial: invalid grade count");
  CVector total = CVector::Zero(static_cast<Eigen::Index>(points.size()));
  Eigen::MatrixXd a = as_batch(points);
  for (int g = 0; g < grades; ++g) {
    const auto& net = stack.grades[g];
    const Eigen::MatrixXd feat = feature(net, a);
    Eigen::MatrixXd head = net.layers.back().W * feat;
    head.colwise() += net.layers.back().b;
    total += complexify(head);
    a = feat;
  }
  return total;
}

CVector compose_solution(const GradeStack& stack, const std::vector<double>& points) {
  if (stack.size() == 0) throw std::logic_error("compose_solution: empty stack");
  return compose_partial(stack, points, stack.size());
}

cplx compose_solution(const GradeStack& stack, double t) {
  return compose_solution(stack, std::vector<double>{t})[0];
}

std::vector<CVector> grade_components(const GradeStack& stack, const std::vector<double>& grid) {
  std::vector<CVector> out;
  if (grid.empty()) {
    out.assign(static_cast<std::size_t>(stack.size()), CVector());
    return out;
  }
  Eigen::MatrixXd a = as_batch(grid);
  for (const auto& net : stack.grades) {
    const Eigen::MatrixXd feat = feature(net, a);
    Eigen::MatrixXd head = net.layers.back().W * feat;
    head.colwise() += net.layers.back().b;
    out.push_back(complexify(head));
    a = feat;
  }
  return out;
}

MgdlResult train_mgdl(const GradeSpec& spec, const SystemMatrix& M, const CVector& v_f, std::uint64_t seed,
                      const ValidationSet* validation) {
  validate_grade_spec(spec);
  MgdlResult result{make_stack(M.params, v_f), {}};
  for (std::size_t g = 0; g < spec.size(); ++g) {
    std::vector<int> dims{result.stack.feature_dim()};
    dims.insert(dims.end(), spec[g].hidden.begin(), spec[g].hidden.end());
    dims.push_back(2);
    SinMlp net = init_he(dims, seed + g);
    TrainConfig config = spec[g].train;
    config.seed = seed + g;
    ValidationFn validator;
    if (validation) validator = make_grade_validator(result.stack, M.params, *validation);
    result.grades.push_back(train_grade(result.stack, std::move(net), M, config, validator));
  }
  return result;
}

}  // namespace oscfie
