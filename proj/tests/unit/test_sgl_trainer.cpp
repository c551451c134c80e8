#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "oscfie/errors.hpp"
#include "oscfie/experiment.hpp"
#include "oscfie/metrics.hpp"
#include "oscfie/sgl_trainer.hpp"

using namespace oscfie;

namespace {

std::vector<long> all_rows(long n) {
  std::vector<long> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), 0L);
  return rows;
}

}  // namespace

TEST_CASE("TrainConfig validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.lrF = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.mu = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(init_he({1, 0, 2}, 0), std::invalid_argument);
}

TEST_CASE("batch loss") {
  const auto params = SystemParams::make(0.2, 5.0);
  const auto M = build_M(params);
  const auto net = init_he({1, 6, 6, 2}, 3);
  const auto x = as_batch(params.nodes());
  const CVector v_g = complexify(evaluate(net, x));
  const auto rows = all_rows(params.N);

  SUBCASE("synthetic right-hand side gives zero loss and gradient") {
    const CVector v_f = M.apply(v_g);
    const auto lg = batch_loss_and_grad(net, M, v_f, rows, 0.0);
    CHECK(lg.loss <= 1e-28);
    for (const auto& dW : lg.grads.dW) CHECK(dW.cwiseAbs().maxCoeff() <= 1e-13);
  }
  SUBCASE("regularizer only") {
    const CVector v_f = M.apply(v_g);
    const auto lg = batch_loss_and_grad(net, M, v_f, rows, 1e-3);
    CHECK(lg.loss == doctest::Approx(1e-3 * net.trainable_weight_norm2()).epsilon(1e-10));
  }
  SUBCASE("full-batch loss equals the discrete-operator residual") {
    const auto y = benchmark_solution(5.0);
    const auto data = gen_training_grid(params, y, 0.2);
    const auto lg = batch_loss_and_grad(net, M, data.f, rows, 0.0);
    const CVector direct = apply_discrete_operator(std::span<const cplx>(v_g.data(), v_g.size()), params) - data.f;
    const double e = seminorm(direct);
    CHECK(lg.loss == doctest::Approx(e * e).epsilon(1e-12));
    CHECK(full_objective(net, x, M, data.f, 0.0) == doctest::Approx(lg.loss).epsilon(1e-12));
  }
  SUBCASE("exact solution leaves only the quadrature residual") {
    const auto y = benchmark_solution(5.0);
    const auto data = gen_training_grid(params, y, 0.2);
    CVector v_y(params.N);
    for (long j = 0; j < params.N; ++j) v_y[j] = evaluate(y, params.node(j));
    const CVector r = M.apply(v_y) - data.f;
    auto probes = default_probe_grid();
    const auto nodes = params.nodes();
    probes.insert(probes.end(), nodes.begin(), nodes.end());
    const double q = sup_quad_error(benchmark_oscillatory_sum(5.0, 2.0, 2), params.quadrature(), probes);
    CHECK(r.cwiseAbs().maxCoeff() <= 0.2 * q * (1 + 1e-12));
  }
  SUBCASE("gradient matches finite differences of the batch loss") {
    const auto y = benchmark_solution(5.0);
    const auto data = gen_training_grid(params, y, 0.2);
    const std::vector<long> batch{0, 3, 7, 11, 30};
    auto probe = net;
    const auto lg = batch_loss_and_grad(probe, M, data.f, batch, 1e-4);
    double worst = 0.0;
    const double h = 1e-6;
    for (std::size_t j = 0; j < probe.layers.size(); ++j) {
      for (Eigen::Index i = 0; i < probe.layers[j].W.size(); i += 3) {
        double& w = probe.layers[j].W.data()[i];
        const double saved = w;
        w = saved + h;
        const double up = batch_loss_and_grad(probe, M, data.f, batch, 1e-4).loss;
        w = saved - h;
        const double down = batch_loss_and_grad(probe, M, data.f, batch, 1e-4).loss;
        w = saved;
        const double numeric = (up - down) / (2 * h);
        const double analytic = lg.grads.dW[j].data()[i];
        worst = std::max(worst, std::abs(numeric - analytic) / std::max(1e-3, std::abs(analytic)));
      }
    }
    CHECK(worst <= 1e-5);
  }
  CHECK_THROWS_AS(batch_loss_and_grad(net, M, CVector::Zero(3), rows, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(batch_loss_and_grad(net, M, v_g, std::vector<long>{}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(batch_loss_and_grad(net, M, v_g, std::vector<long>{params.N}, 0.0), std::invalid_argument);
}

TEST_CASE("validation loss") {
  const double kappa = 10.0;
  const auto params = SystemParams::make(0.2, kappa);
  const auto y = benchmark_solution(kappa);
  const auto v = gen_validation_grid(y, 0.2, kappa);
  const std::span<const cplx> f(v.f.data(), v.f.size());

  const ComplexFn zero = [](double) { return cplx{0.0, 0.0}; };
  CHECK(validation_loss(zero, params, v.points, f) == doctest::Approx(v.f.squaredNorm() / 512.0).epsilon(1e-14));
  const std::vector<cplx> zeros(512, 0.0);
  CHECK(validation_loss(zero, params, v.points, zeros) == 0.0);

  const auto chi = benchmark_oscillatory_sum(kappa, 2.0, 2);
  auto probes = v.points;
  const double q = sup_quad_error(chi, params.quadrature(), probes);
  CHECK(validation_loss(as_function(y), params, v.points, f) <= std::pow(0.2 * q, 2) * (1 + 1e-12));
}

TEST_CASE("training") {
  const double kappa = 5.0;
  const auto params = SystemParams::make(0.2, kappa);
  const auto M = build_M(params);
  const auto y = benchmark_solution(kappa);
  const auto data = gen_training_grid(params, y, 0.2);
  const auto validation = gen_validation_grid(y, 0.2, kappa);
  TrainConfig config;
  config.epochs = 150;
  config.batch_size = 8;
  config.lrF = 1e-4;
  config.seed = 4;

  const auto a = train_single_grade(init_he({1, 16, 16, 2}, 4), as_batch(data.x), M, data.f, config,
                                    make_validator(params, validation));
  const auto b = train_single_grade(init_he({1, 16, 16, 2}, 4), as_batch(data.x), M, data.f, config,
                                    make_validator(params, validation));
  CHECK(a.history.size() == 150);
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    CHECK(a.history[e].train_loss == b.history[e].train_loss);
    CHECK(a.history[e].val_loss == b.history[e].val_loss);
    CHECK(a.history[e].train_loss >= 0.0);
    CHECK(std::isfinite(a.history[e].val_loss));
  }
  CHECK(a.net.layers[0].W == b.net.layers[0].W);
  CHECK(a.best_val_epoch >= 0);

  // End-of-run 100-epoch moving average is below the epoch-100 value... scaled to this short run.
  double tail = 0.0;
  for (std::size_t e = a.history.size() - 25; e < a.history.size(); ++e) tail += a.history[e].train_loss / 25.0;
  CHECK(tail < a.history[25].train_loss);

  SUBCASE("frozen layers are untouched") {
    auto net = init_he({1, 16, 16, 2}, 9);
    net.layers[0].trainable = false;
    const auto frozen = net.layers[0];
    const auto r = train_single_grade(net, as_batch(data.x), M, data.f, config);
    CHECK(r.net.layers[0].W == frozen.W);
    CHECK(r.net.layers[0].b == frozen.b);
  }
  SUBCASE("non-finite loss aborts") {
    auto net = init_he({1, 4, 2}, 1);
    net.layers[1].W(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(train_single_grade(net, as_batch(data.x), M, data.f, config), DivergenceError);
  }
  CHECK_THROWS_AS(train_single_grade(init_he({2, 4, 2}, 1), as_batch(data.x), M, data.f, config),
                  std::invalid_argument);
}

TEST_CASE("desk-scale single-grade run reaches a small error") {
  // kappa = 20, N = 121, [1, 64, 64, 2], 2000 epochs.
  const double kappa = 20.0;
  const auto params = SystemParams::make(0.2, kappa);
  REQUIRE(params.N == 121);
  const auto M = build_M(params);
  const auto y = benchmark_solution(kappa);
  const auto data = gen_training_grid(params, y, 0.2);
  TrainConfig config;
  config.epochs = 2000;
  config.batch_size = 64;
  config.lrF = 1e-4;
  const auto r = train_single_grade(init_he({1, 64, 64, 2}, 0), as_batch(data.x), M, data.f, config);
  const CVector on_grid = complexify(evaluate(r.net, as_batch(metric_grid())));
  CHECK(relative_L2_error(std::span<const cplx>(on_grid.data(), on_grid.size()), y) < 5e-2);
}

TEST_CASE("history csv") {
  TrainRecord h{{0, 1.0, 2.0, 1e-2, 0.5}};
  std::ostringstream os;
  write_history_csv(os, h);
  CHECK(os.str().rfind("epoch,train_loss,val_loss,lr,seconds\n0,1,2,0.01,0.5\n", 0) == 0);
}
