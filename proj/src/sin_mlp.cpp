#include "oscfie/sin_mlp.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace oscfie {

std::vector<int> SinMlp::dims() const {
  std::vector<int> out;
  if (layers.empty()) return out;
  out.push_back(input_dim());
  for (const auto& layer : layers) out.push_back(static_cast<int>(layer.W.rows()));
  return out;
}

void SinMlp::validate() const {
  if (layers.empty()) throw std::invalid_argument("SinMlp: no layers");
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const auto& layer = layers[j];
    if (layer.W.rows() < 1 || layer.W.cols() < 1) throw std::invalid_argument("SinMlp: empty layer");
    if (layer.b.size() != layer.W.rows()) throw std::invalid_argument("SinMlp: bias size mismatch");
    if (j > 0 && layer.W.cols() != layers[j - 1].W.rows())
      throw std::invalid_argument("SinMlp: consecutive layer shapes do not chain");
  }
  if (output_dim() != 2) throw std::invalid_argument("SinMlp: output dimension must be 2");
}

void SinMlp::freeze() {
  for (auto& layer : layers) layer.trainable = false;
}

double SinMlp::trainable_weight_norm2() const {
  double sum = 0.0;
  for (const auto& layer : layers)
    if (layer.trainable) sum += layer.W.squaredNorm();
  return sum;
}

SinMlp init_he(const std::vector<int>& dims, std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("init_he: need at least input and output widths");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("init_he: every width must be >= 1");
  if (dims.back() != 2) throw std::invalid_argument("init_he: output width must be 2");

  std::mt19937_64 rng(seed);
  SinMlp net;
  for (std::size_t j = 1; j < dims.size(); ++j) {
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / dims[j - 1]));
    DenseLayer layer;
    layer.W.resize(dims[j], dims[j - 1]);
    // Row-major fill order so the draw sequence does not depend on storage order.
    for (int r = 0; r < dims[j]; ++r)
      for (int c = 0; c < dims[j - 1]; ++c) layer.W(r, c) = normal(rng);
    layer.b = Eigen::VectorXd::Zero(dims[j]);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

ForwardResult forward(const SinMlp& net, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != net.input_dim()) throw std::invalid_argument("forward: input dimension mismatch");
  ForwardResult result;
  const std::size_t n = net.layers.size();
  result.tape.inputs.reserve(n);
  result.tape.pre.reserve(n - 1);
  Eigen::MatrixXd a = inputs;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const auto& layer = net.layers[j];
    Eigen::MatrixXd z = layer.W * a;
    z.colwise() += layer.b;
    result.tape.inputs.push_back(std::move(a));
    a = z.array().sin().matrix();
    result.tape.pre.push_back(std::move(z));
  }
  const auto& head = net.layers.back();
  result.outputs = head.W * a;
  result.outputs.colwise() += head.b;
  result.tape.inputs.push_back(std::move(a));
  return result;
}

Eigen::MatrixXd feature(const SinMlp& net, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != net.input_dim()) throw std::invalid_argument("feature: input dimension mismatch");
  Eigen::MatrixXd a = inputs;
  for (std::size_t j = 0; j + 1 < net.layers.size(); ++j) {
    const auto& layer = net.layers[j];
    Eigen::MatrixXd z = layer.W * a;
    z.colwise() += layer.b;
    a = z.array().sin().matrix();
  }
  return a;
}

Eigen::MatrixXd evaluate(const SinMlp& net, const Eigen::MatrixXd& inputs) {
  const auto& head = net.layers.back();
  Eigen::MatrixXd out = head.W * feature(net, inputs);
  out.colwise() += head.b;
  return out;
}

Eigen::MatrixXd as_batch(const std::vector<double>& points) {
  Eigen::MatrixXd batch(1, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) batch(0, static_cast<Eigen::Index>(i)) = points[i];
  return batch;
}

Eigen::VectorXcd complexify(const Eigen::MatrixXd& pair_outputs) {
  if (pair_outputs.rows() != 2) throw std::invalid_argument("complexify: expected 2 rows");
  Eigen::VectorXcd out(pair_outputs.cols());
  for (Eigen::Index i = 0; i < pair_outputs.cols(); ++i) out[i] = {pair_outputs(0, i), pair_outputs(1, i)};
  return out;
}

Gradients backward(const SinMlp& net, const ForwardTape& tape, const Eigen::MatrixXd& output_cotangents) {
  const std::size_t n = net.layers.size();
  if (tape.inputs.size() != n || tape.pre.size() + 1 != n)
    throw std::invalid_argument("backward: tape does not match network depth");
  if (output_cotangents.rows() != net.output_dim() || output_cotangents.cols() != tape.inputs.back().cols())
    throw std::invalid_argument("backward: cotangent shape mismatch");

  Gradients g;
  g.dW.resize(n);
  g.db.resize(n);

  // Layers below the lowest trainable one need no cotangent.
  std::size_t lowest = n;
  for (std::size_t j = 0; j < n; ++j)
    if (net.layers[j].trainable) {
      lowest = j;
      break;
    }

  Eigen::MatrixXd delta = output_cotangents;  // d/d(pre-activation output) of layer j
  for (std::size_t j = n; j-- > 0;) {
    const auto& layer = net.layers[j];
    if (layer.trainable) {
      g.dW[j] = delta * tape.inputs[j].transpose();
      g.db[j] = delta.rowwise().sum();
    }
    if (j == 0 || j <= lowest) break;
    // Through W_j, then through sin of layer j-1.
    Eigen::MatrixXd upstream = layer.W.transpose() * delta;
    delta = (upstream.array() * tape.pre[j - 1].array().cos()).matrix();
  }
  return g;
}

AdamState make_adam(const SinMlp& net, double beta1, double beta2, double eps) {
  AdamState state;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.eps = eps;
  for (const auto& layer : net.layers) {
    if (layer.trainable) {
      state.mW.push_back(Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols()));
      state.mb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    } else {
      state.mW.emplace_back();
      state.mb.emplace_back();
    }
  }
  state.vW = state.mW;
  state.vb = state.mb;
  return state;
}

void adam_step(AdamState& state, SinMlp& net, const Gradients& grads, double lr) {
  if (!(lr > 0.0)) throw std::domain_error("adam_step: learning rate must be positive");
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  auto update = [&](auto& param, auto& m, auto& v, const auto& grad) {
    m = state.beta1 * m + (1.0 - state.beta1) * grad;
    v = state.beta2 * v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + state.eps);
  };
  for (std::size_t j = 0; j < net.layers.size(); ++j) {
    auto& layer = net.layers[j];
    if (!layer.trainable) continue;
    update(layer.W, state.mW[j], state.vW[j], grads.dW[j]);
    update(layer.b, state.mb[j], state.vb[j], grads.db[j]);
  }
}

double lr_schedule(int epoch, int total_epochs, double lr0, double lrF) {
  if (!(lr0 > 0.0 && lrF > 0.0)) throw std::domain_error("lr_schedule: rates must be positive");
  if (epoch < 0 || epoch >= total_epochs) throw std::domain_error("lr_schedule: epoch out of range");
  if (total_epochs == 1) return lr0;
  if (epoch == total_epochs - 1) return lrF;
  const double frac = static_cast<double>(epoch) / static_cast<double>(total_epochs - 1);
  return lr0 * std::pow(lrF / lr0, frac);
}

}  // namespace oscfie
