#include "oscfie/sgl_trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oscfie/errors.hpp"

namespace oscfie {

namespace {

constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ULL;

Eigen::MatrixXd to_cotangents(const CVector& w) {
  Eigen::MatrixXd out(2, w.size());
  out.row(0) = w.real().transpose();
  out.row(1) = w.imag().transpose();
  return out;
}

void add_regularizer_grad(const SinMlp& net, Gradients& grads, double mu) {
  if (mu == 0.0) return;
  for (std::size_t j = 0; j < net.layers.size(); ++j)
    if (net.layers[j].trainable) grads.dW[j] += 2.0 * mu * net.layers[j].W;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (!(mu >= 0.0)) throw std::invalid_argument("TrainConfig: mu must be >= 0");
  if (!(lrF > 0.0 && lr0 >= lrF)) throw std::invalid_argument("TrainConfig: need lr0 >= lrF > 0");
}

void write_history_csv(std::ostream& os, const TrainRecord& history) {
  const auto precision = os.precision(17);
  os << "epoch,train_loss,val_loss,lr,seconds\n";
  for (const auto& r : history)
    os << r.epoch << ',' << r.train_loss << ',' << r.val_loss << ',' << r.lr << ',' << r.seconds << '\n';
  os.precision(precision);
}

LossAndGrad batch_loss_and_grad(const SinMlp& net, const Eigen::MatrixXd& node_inputs, const SystemMatrix& M,
                                const CVector& target, std::span<const long> rows, double mu) {
  const long n = M.size();
  if (node_inputs.cols() != n || target.size() != n)
    throw std::invalid_argument("batch_loss_and_grad: node count mismatch");
  if (rows.empty()) throw std::invalid_argument("batch_loss_and_grad: empty batch");

  auto fwd = forward(net, node_inputs);
  const CVector v_g = complexify(fwd.outputs);

  const auto batch = static_cast<Eigen::Index>(rows.size());
  CVector residual(batch);
  for (Eigen::Index r = 0; r < batch; ++r) {
    const long row = rows[r];
    if (row < 0 || row >= n) throw std::invalid_argument("batch_loss_and_grad: row index out of range");
    residual[r] = (M.entries.row(row) * v_g).value() - target[row];
  }
  const double scale = 1.0 / static_cast<double>(batch);
  LossAndGrad out;
  out.loss = scale * residual.squaredNorm() + mu * net.trainable_weight_norm2();

  // d loss / d Re v + i d loss / d Im v = (2/B) M_rows^H r.
  CVector w = CVector::Zero(n);
  for (Eigen::Index r = 0; r < batch; ++r) w += (2.0 * scale * residual[r]) * M.entries.row(rows[r]).adjoint();
  out.grads = backward(net, fwd.tape, to_cotangents(w));
  add_regularizer_grad(net, out.grads, mu);
  return out;
}

LossAndGrad batch_loss_and_grad(const SinMlp& net, const SystemMatrix& M, const CVector& v_f,
                                std::span<const long> rows, double mu) {
  return batch_loss_and_grad(net, as_batch(M.params.nodes()), M, v_f, rows, mu);
}

double full_objective(const SinMlp& net, const Eigen::MatrixXd& node_inputs, const SystemMatrix& M,
                      const CVector& target, double mu) {
  const CVector v_g = complexify(evaluate(net, node_inputs));
  const CVector residual = M.entries * v_g - target;
  return residual.squaredNorm() / static_cast<double>(M.size()) + mu * net.trainable_weight_norm2();
}

double validation_loss(std::span<const cplx> Y_at_points, std::span<const cplx> Y_at_quadrature,
                       const SystemParams& params, std::span<const double> points,
                       std::span<const cplx> f_at_points) {
  if (Y_at_points.size() != points.size() || f_at_points.size() != points.size())
    throw std::invalid_argument("validation_loss: point count mismatch");
  if (points.empty()) return 0.0;
  const auto Ky = apply_Kp_grid(Y_at_quadrature, params.quadrature(), points);
  double sum = 0.0;
  for (std::size_t l = 0; l < points.size(); ++l)
    sum += std::norm(f_at_points[l] - (Y_at_points[l] - params.lambda * Ky[l]));
  return sum / static_cast<double>(points.size());
}

double validation_loss(const ComplexFn& Y, const SystemParams& params, std::span<const double> points,
                       std::span<const cplx> f_at_points) {
  std::vector<cplx> at_points(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) at_points[i] = Y(points[i]);
  const auto spec = params.quadrature();
  std::vector<cplx> at_quad(static_cast<std::size_t>(spec.p) + 1);
  for (long j = 0; j <= spec.p; ++j) at_quad[j] = Y(spec.node(j));
  return validation_loss(at_points, at_quad, params, points, f_at_points);
}

TrainResult train_single_grade(SinMlp net, const Eigen::MatrixXd& node_inputs, const SystemMatrix& M,
                               const CVector& target, const TrainConfig& config, const ValidationFn& validate) {
  config.validate();
  net.validate();
  const long n = M.size();
  if (node_inputs.cols() != n || node_inputs.rows() != net.input_dim() || target.size() != n)
    throw std::invalid_argument("train_single_grade: dimension mismatch");

  std::mt19937_64 rng(config.seed ^ kShuffleStream);
  AdamState adam = make_adam(net, config.adam_beta1, config.adam_beta2, config.adam_eps);
  std::vector<long> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0L);

  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(config.epochs));
  double best_val = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = lr_schedule(epoch, config.epochs, config.lr0, config.lrF);
    for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t count = std::min<std::size_t>(config.batch_size, order.size() - first);
      const std::span<const long> rows(order.data() + first, count);
      auto step = batch_loss_and_grad(net, node_inputs, M, target, rows, config.mu);
      if (!std::isfinite(step.loss)) {
        std::ostringstream msg;
        msg << "training diverged at epoch " << epoch << " (non-finite batch loss)";
        throw DivergenceError(msg.str(), epoch);
      }
      adam_step(adam, net, step.grads, lr);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.train_loss = full_objective(net, node_inputs, M, target, config.mu);
    if (!std::isfinite(rec.train_loss)) {
      std::ostringstream msg;
      msg << "training diverged at epoch " << epoch << " (non-finite training loss)";
      throw DivergenceError(msg.str(), epoch);
    }
    rec.val_loss = validate ? validate(net) : std::numeric_limits<double>::quiet_NaN();
    if (validate && rec.val_loss < best_val) {
      best_val = rec.val_loss;
      result.best_val_epoch = epoch;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(rec);
  }
  result.net = std::move(net);
  return result;
}

ValidationFn make_validator(const SystemParams& params, const ValidationSet& validation) {
  const auto spec = params.quadrature();
  Eigen::MatrixXd point_inputs = as_batch(validation.points);
  Eigen::MatrixXd quad_inputs = as_batch(spec.nodes());
  std::vector<cplx> f(validation.f.data(), validation.f.data() + validation.f.size());
  return [params, points = validation.points, f = std::move(f), point_inputs = std::move(point_inputs),
          quad_inputs = std::move(quad_inputs)](const SinMlp& net) {
    const CVector at_points = complexify(evaluate(net, point_inputs));
    const CVector at_quad = complexify(evaluate(net, quad_inputs));
    return validation_loss(std::span<const cplx>(at_points.data(), at_points.size()),
                           std::span<const cplx>(at_quad.data(), at_quad.size()), params, points, f);
  };
}

}  // namespace oscfie
