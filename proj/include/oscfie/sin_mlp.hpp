#pragma once

// Fully connected network with sin activations on every hidden layer and an
// affine output layer, plus reverse-mode gradients and Adam.
//
// Batches are stored column-wise: an input batch is (m_0 x B), the output
// batch is (2 x B).

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace oscfie {

struct DenseLayer {
  Eigen::MatrixXd W;  ///< m_j x m_{j-1}
  Eigen::VectorXd b;  ///< m_j
  bool trainable = true;
};

struct SinMlp {
  std::vector<DenseLayer> layers;

  /// m_0 .. m_n.
  std::vector<int> dims() const;
  int input_dim() const { return static_cast<int>(layers.front().W.cols()); }
  int output_dim() const { return static_cast<int>(layers.back().W.rows()); }
  /// Width of the last hidden layer (m_{n-1}); equals input_dim() with no hidden layer.
  int feature_dim() const { return static_cast<int>(layers.back().W.cols()); }
  /// Throws std::invalid_argument on inconsistent shapes or an output width other than 2.
  void validate() const;
  void freeze();
  /// sum over trainable layers of ||W||_F^2.
  double trainable_weight_norm2() const;
};

/// W_j ~ N(0, 2/m_{j-1}) i.i.d., b_j = 0. Requires dims.size() >= 2, every
/// width >= 1 and dims.back() == 2; throws std::invalid_argument otherwise.
SinMlp init_he(const std::vector<int>& dims, std::uint64_t seed);

struct ForwardTape {
  std::vector<Eigen::MatrixXd> inputs;  ///< input to layer j (m_{j-1} x B)
  std::vector<Eigen::MatrixXd> pre;     ///< W_j a + b_j for hidden layers j < n
};

struct ForwardResult {
  Eigen::MatrixXd outputs;  ///< 2 x B
  ForwardTape tape;
};

ForwardResult forward(const SinMlp& net, const Eigen::MatrixXd& inputs);
/// Output only, without keeping a tape.
Eigen::MatrixXd evaluate(const SinMlp& net, const Eigen::MatrixXd& inputs);
/// Activations of the last hidden layer (m_{n-1} x B).
Eigen::MatrixXd feature(const SinMlp& net, const Eigen::MatrixXd& inputs);
/// Convenience for scalar-input networks.
Eigen::MatrixXd as_batch(const std::vector<double>& points);

/// (f1, f2) -> f1 + i f2.
inline std::complex<double> complexify(double f1, double f2) { return {f1, f2}; }
Eigen::VectorXcd complexify(const Eigen::MatrixXd& pair_outputs);

/// Per-layer gradients; frozen layers hold empty (0x0 / size 0) entries.
struct Gradients {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

/// Gradient of sum_b <cotangent_b, output_b> with respect to all trainable
/// parameters. Throws std::invalid_argument on shape mismatch.
Gradients backward(const SinMlp& net, const ForwardTape& tape, const Eigen::MatrixXd& output_cotangents);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
};

/// Zero moments shaped like the trainable tensors of net.
AdamState make_adam(const SinMlp& net, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

/// Bias-corrected Adam update of every trainable layer; frozen layers are untouched.
void adam_step(AdamState& state, SinMlp& net, const Gradients& grads, double lr);

/// lr0 (lrF/lr0)^{epoch/(total-1)}; lr0 at epoch 0 and lrF at the last epoch.
/// Throws std::domain_error unless 0 <= epoch < total and both rates are positive.
double lr_schedule(int epoch, int total_epochs, double lr0, double lrF);

}  // namespace oscfie
