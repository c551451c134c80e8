#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oscfie/discrete_system.hpp"
#include "oscfie/errors.hpp"
#include "oscfie/quadrature.hpp"

using namespace oscfie;

namespace {

const cplx I{0.0, 1.0};

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("p_kappa") {
  CHECK(p_kappa(6.0, 1.0, 100.0) == 600);
  CHECK(p_kappa(6.0, 1.0, 1.0) == 6);
  CHECK(p_kappa(3.5, 1.5, 4.0) == 28);
  CHECK(p_kappa(6.0, 1.0, 100.5) == 603);
  CHECK_THROWS_AS(p_kappa(0.0, 1.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(p_kappa(6.0, 0.5, 10.0), std::domain_error);
  CHECK_THROWS_AS(p_kappa(6.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("QuadratureSpec nodes and rule") {
  const auto spec = QuadratureSpec::from_rule(6.0, 1.0, 10.0);
  CHECK(spec.p == 60);
  const auto nodes = spec.nodes();
  CHECK(nodes.size() == 61);
  CHECK(nodes.front() == -1.0);
  CHECK(nodes.back() == 1.0);
  CHECK(spec.weight(0) == doctest::Approx(spec.h / 2));
  CHECK_NOTHROW(spec.check_rule(2.0));
  CHECK_THROWS_AS(spec.check_rule(3.5), std::domain_error);
}

TEST_CASE("apply_Kp basics") {
  const auto spec = QuadratureSpec::from_rule(6.0, 1.0, 10.0);
  const ComplexFn zero = [](double) { return cplx{0.0, 0.0}; };
  const ComplexFn one = [](double) { return cplx{1.0, 0.0}; };
  CHECK(std::abs(apply_Kp(zero, spec, 0.3)) == 0.0);

  SUBCASE("F = 1 at kappa = 100 within the quadrature bound") {
    const auto s100 = QuadratureSpec::from_rule(6.0, 1.0, 100.0);
    const PolyExpSum terms{{{1.0}, 0.0}};
    const double bound = quad_error_bound(1, 1.0, 0.0, 2, 6.0, 1.0, 100.0);
    for (double s : default_probe_grid(41))
      CHECK(std::abs(apply_Kp(one, s100, s) - exact_K_polyexp(terms, 100.0, s)) <= bound);
  }
  SUBCASE("F = 1, kappa = pi, s = 0 converges to 4i/pi") {
    double previous = 1e300;
    for (long p : {8L, 32L, 128L, 512L}) {
      const double err = std::abs(apply_Kp(one, QuadratureSpec::with_panels(M_PI, p), 0.0) - 4.0 * I / M_PI);
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 1e-4);
  }
}

TEST_CASE("apply_Kp_grid") {
  const auto spec = QuadratureSpec::from_rule(6.0, 1.0, 10.0);
  const auto nodes = spec.nodes();
  std::vector<cplx> ones(nodes.size(), 1.0);
  const ComplexFn one = [](double) { return cplx{1.0, 0.0}; };
  std::vector<double> target{spec.node(5)};
  CHECK(std::abs(apply_Kp_grid(ones, spec, target)[0] - apply_Kp(one, spec, spec.node(5))) < 1e-15);

  std::vector<cplx> zeros(nodes.size(), 0.0);
  for (const auto& v : apply_Kp_grid(zeros, spec, nodes)) CHECK(std::abs(v) == 0.0);

  SUBCASE("F(t) = t at the nodes matches (I - M) v / lambda") {
    const cplx lambda{0.2, 0.0};
    const auto params = SystemParams::make(lambda, 10.0);
    const auto M = build_M(params);
    CVector v(params.N);
    for (long j = 0; j < params.N; ++j) v[j] = params.node(j);
    const CVector reconstructed = (v - M.entries * v) / lambda;
    std::vector<cplx> samples(v.data(), v.data() + v.size());
    const auto direct = apply_Kp_grid(samples, spec, nodes);
    for (long j = 0; j < params.N; ++j) CHECK(std::abs(direct[j] - reconstructed[j]) <= 1e-12);
  }

  CHECK_THROWS_AS(apply_Kp_grid(std::vector<cplx>(3, 1.0), spec, nodes), std::invalid_argument);
  CHECK_THROWS_AS(apply_Kp_grid(ones, spec, std::vector<double>{1.5}), std::invalid_argument);
}

TEST_CASE("apply_Kp is linear") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto spec = QuadratureSpec::from_rule(6.0, 1.0, 25.0);
  std::vector<cplx> F(spec.p + 1), G(spec.p + 1), H(spec.p + 1);
  const cplx a{n(rng), n(rng)}, b{n(rng), n(rng)};
  for (long j = 0; j <= spec.p; ++j) {
    F[j] = {n(rng), n(rng)};
    G[j] = {n(rng), n(rng)};
    H[j] = a * F[j] + b * G[j];
  }
  const auto probes = default_probe_grid(31);
  const auto kf = apply_Kp_grid(F, spec, probes);
  const auto kg = apply_Kp_grid(G, spec, probes);
  const auto kh = apply_Kp_grid(H, spec, probes);
  for (std::size_t i = 0; i < probes.size(); ++i)
    CHECK(std::abs(kh[i] - (a * kf[i] + b * kg[i])) <= 1e-13 * std::max(1.0, std::abs(kh[i])));
}

TEST_CASE("reference_K") {
  const ComplexFn zero = [](double) { return cplx{0.0, 0.0}; };
  const ComplexFn one = [](double) { return cplx{1.0, 0.0}; };
  CHECK(std::abs(reference_K(zero, 10.0, 0.2, 1e-12)) == 0.0);
  CHECK(std::abs(reference_K(one, M_PI, 0.0, 1e-12) - 4.0 * I / M_PI) <= 1e-12);

  const ComplexFn wave = [](double t) { return std::exp(I * 50.0 * t); };
  const PolyExpSum terms{{{1.0}, {0.0, 50.0}}};
  CHECK(std::abs(reference_K(wave, 50.0, 0.3, 1e-12) - exact_K_polyexp(terms, 50.0, 0.3)) <= 1e-12);

  CHECK_THROWS_AS(reference_K(wave, 50.0, 0.3, 1e-30, 1), ConvergenceError);
}

TEST_CASE("quad_error_bound") {
  CHECK(quad_error_bound(1, 1.0, 0.0, 1, 3.0, 1.0, 1.0) == doctest::Approx(125.0 / 15.0).epsilon(1e-14));
  // 44*39/3000 + 27*39*9/180 = 0.572 + 52.65.
  CHECK(quad_error_bound(3, 13.0, 0.0, 2, 6.0, 1.0, 100.0) == doctest::Approx(53.222).epsilon(1e-13));
  double previous = 1e300;
  for (double kappa : {1.0, 10.0, 100.0, 1000.0}) {
    const double b = quad_error_bound(1, 1.0, 0.0, 2, 3.0, 1.5, kappa);
    CHECK(b < previous);
    previous = b;
  }
  CHECK_THROWS_AS(quad_error_bound(1, 1.0, 2.0, 1, 4.0, 1.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(quad_error_bound(1, 1.0, 0.0, 1, 3.0, 0.9, 10.0), std::domain_error);
}

TEST_CASE("OscillatorySum of the benchmark solution") {
  const auto chi = benchmark_oscillatory_sum(100.0, 2.0, 2);
  CHECK(chi.r() == 3);
  CHECK(chi.tau == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(chi.polynomial());
  CHECK_NOTHROW(chi.validate());
  const auto y = benchmark_solution(100.0);
  CHECK(std::abs(chi(0.37) - evaluate(y, 0.37)) < 1e-13);

  OscillatorySum bad = chi;
  bad.terms[0].alpha = 3.5;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = chi;
  bad.tau = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("sup_quad_error against the bound") {
  const auto probes = default_probe_grid();
  CHECK(probes.size() == 201);
  OscillatorySum zero;
  zero.terms.push_back({std::vector<cplx>{0.0}, 0.0});
  zero.kappa = 10.0;
  CHECK(sup_quad_error(zero, QuadratureSpec::from_rule(6.0, 1.0, 10.0), probes) == 0.0);

  SUBCASE("spec example with tau = 13, Gamma = 0") {
    auto chi = benchmark_oscillatory_sum(100.0, 0.0, 2);
    chi.tau = 13.0;
    const double err = sup_quad_error(chi, QuadratureSpec::from_rule(6.0, 1.0, 100.0), probes);
    CHECK(err <= quad_error_bound(3, 13.0, 0.0, 2, 6.0, 1.0, 100.0));
  }

  SUBCASE("randomized polynomial sums") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double kappa : {10.0, 50.0, 100.0}) {
      for (double beta : {1.0, 1.5}) {
        OscillatorySum chi;
        chi.kappa = kappa;
        chi.Gamma = 1.0;
        chi.m = 2;
        for (int r = 0; r < 3; ++r) {
          std::vector<cplx> w{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
          chi.tau = std::max(chi.tau, derivative_sup(w, chi.m));
          chi.terms.push_back({w, 2.0 * u(rng)});
        }
        const double gamma = chi.Gamma + 3.0;
        const auto spec = QuadratureSpec::from_rule(gamma, beta, kappa);
        CHECK(sup_quad_error(chi, spec, probes) <=
              quad_error_bound(chi.r(), chi.tau, chi.Gamma, chi.m, gamma, beta, kappa));
      }
    }
  }

  SUBCASE("callable weights take the reference path") {
    auto chi = benchmark_oscillatory_sum(10.0, 2.0, 2);
    auto callable = chi;
    callable.terms[0].weight = ComplexFn([](double s) { return cplx{s, 0.0}; });
    const auto spec = QuadratureSpec::from_rule(6.0, 1.0, 10.0);
    const auto few = default_probe_grid(11);
    CHECK(sup_quad_error(callable, spec, few) == doctest::Approx(sup_quad_error(chi, spec, few)).epsilon(1e-9));
  }
}

TEST_CASE("sup_quad_error decays at least first order in p") {
  // The trapezoid rule is second order here; the guaranteed rate is first order.
  const auto probes = default_probe_grid();
  for (double kappa : {10.0, 50.0}) {
    const auto chi = benchmark_oscillatory_sum(kappa, 2.0, 2);
    const long p0 = p_kappa(6.0, 1.0, kappa);
    std::vector<double> ps, errs;
    for (long p = p0; p <= 8 * p0; p *= 2) {
      ps.push_back(static_cast<double>(p));
      errs.push_back(sup_quad_error(chi, QuadratureSpec::with_panels(kappa, p), probes));
    }
    CHECK(loglog_slope(ps, errs) <= -0.8);
  }
}

TEST_CASE("derivative_sup") {
  // u(s) = 3s^2 + 2s + 1: sup|u| = 6, sup|u'| = 8, sup|u''| = 6.
  const std::vector<cplx> u{1.0, 2.0, 3.0};
  CHECK(derivative_sup(u, 0) == doctest::Approx(6.0));
  CHECK(derivative_sup(u, 1) == doctest::Approx(8.0));
  CHECK(derivative_sup(u, 2) == doctest::Approx(8.0));
}
