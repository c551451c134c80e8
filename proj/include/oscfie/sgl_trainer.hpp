#pragma once

// Least-squares training of a sin network against the discrete system
//   min (1/N) || M v_g - v_f ||^2 + mu sum ||W_j||_F^2
// with mini-batches over residual rows.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "oscfie/discrete_system.hpp"
#include "oscfie/sin_mlp.hpp"

namespace oscfie {

struct TrainConfig {
  int epochs = 3500;
  int batch_size = 128;
  double mu = 0.0;
  double lr0 = 1e-2;
  double lrF = 1e-7;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  /// Throws std::invalid_argument on epochs < 1, batch_size < 1, mu < 0 or
  /// rates outside lr0 >= lrF > 0.
  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;  ///< NaN without validation data
  double lr = 0.0;
  double seconds = 0.0;   ///< wall time since training started
};

using TrainRecord = std::vector<EpochRecord>;

/// CSV with header epoch,train_loss,val_loss,lr,seconds.
void write_history_csv(std::ostream& os, const TrainRecord& history);

struct LossAndGrad {
  double loss = 0.0;
  Gradients grads;
};

/// Loss and gradient on a batch of residual rows. The network is evaluated at
/// every collocation node (node_inputs is m_0 x N) because K_p couples each
/// row to all quadrature nodes; only the selected rows enter the residual.
/// Throws std::invalid_argument on dimension mismatches or an empty batch.
LossAndGrad batch_loss_and_grad(const SinMlp& net, const Eigen::MatrixXd& node_inputs, const SystemMatrix& M,
                                const CVector& target, std::span<const long> rows, double mu);

/// Scalar-input form: the network inputs are the collocation nodes of M.
LossAndGrad batch_loss_and_grad(const SinMlp& net, const SystemMatrix& M, const CVector& v_f,
                                std::span<const long> rows, double mu);

/// (1/N) ||M v_g - target||^2 + mu sum_trainable ||W||_F^2.
double full_objective(const SinMlp& net, const Eigen::MatrixXd& node_inputs, const SystemMatrix& M,
                      const CVector& target, double mu);

/// (1/V) sum_l |f(x'_l) - ((I - lambda K_p) Y)(x'_l)|^2 from Y at the
/// validation points and at the p+1 quadrature nodes.
double validation_loss(std::span<const cplx> Y_at_points, std::span<const cplx> Y_at_quadrature,
                       const SystemParams& params, std::span<const double> points,
                       std::span<const cplx> f_at_points);

/// Same, sampling an evaluable Y.
double validation_loss(const ComplexFn& Y, const SystemParams& params, std::span<const double> points,
                       std::span<const cplx> f_at_points);

using ValidationFn = std::function<double(const SinMlp&)>;

struct TrainResult {
  SinMlp net;            ///< final-epoch network
  TrainRecord history;
  int best_val_epoch = -1;
};

/// Epoch loop: shuffle rows under config.seed, Adam per batch, exponential
/// per-epoch learning-rate decay. Throws DivergenceError on a non-finite loss.
TrainResult train_single_grade(SinMlp net, const Eigen::MatrixXd& node_inputs, const SystemMatrix& M,
                               const CVector& target, const TrainConfig& config,
                               const ValidationFn& validate = {});

/// Validation data for a scalar-input network.
struct ValidationSet {
  std::vector<double> points;
  CVector f;
};

/// Validation closure for a single-grade network: Y = T net(.).
ValidationFn make_validator(const SystemParams& params, const ValidationSet& validation);

}  // namespace oscfie
