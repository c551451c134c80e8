#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

#include "oscfie/collocation.hpp"
#include "oscfie/discrete_system.hpp"
#include "oscfie/metrics.hpp"
#include "oscfie/quadrature.hpp"

using namespace oscfie;

namespace {

double cm_error(int degree, double kappa, int q) {
  const auto params = SystemParams::make(0.2, kappa, 6.0, 1.0, q);
  const auto y = benchmark_solution(kappa);
  std::vector<cplx> f(params.N);
  for (long j = 0; j < params.N; ++j) f[j] = rhs_f(y, 0.2, kappa, params.node(j));
  const auto sol = solve_collocation(PiecewiseBasis::make(degree, params.N), 0.2, kappa, f);
  return relative_L2_error([&](double t) { return eval_collocation(sol, t); }, y);
}

// int_{-1}^{1} phi_l(t) e^{i kappa |s - t|} dt with Gauss-Kronrod on every
// interval where the integrand is smooth (element nodes and s as breakpoints).
cplx kernel_moment_oracle(const PiecewiseBasis& b, long l, double kappa, double s) {
  std::vector<double> cuts;
  for (long j = 0; j < b.N; j += b.degree) cuts.push_back(b.node(j));
  cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cplx total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] <= cuts[k]) continue;
    auto part = [&](bool imag) {
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double t) {
            const cplx v = basis_eval(b, l, t) * std::polar(1.0, kappa * std::abs(s - t));
            return imag ? v.imag() : v.real();
          },
          cuts[k], cuts[k + 1], 0);
    };
    total += cplx{part(false), part(true)};
  }
  return total;
}

}  // namespace

TEST_CASE("PiecewiseBasis") {
  CHECK_THROWS_AS(PiecewiseBasis::make(3, 10), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseBasis::make(2, 10), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseBasis::make(1, 1), std::invalid_argument);
  const auto b = PiecewiseBasis::make(2, 9);
  CHECK(b.elements() == 4);
  CHECK(b.element_of(-1.0) == 0);
  CHECK(b.element_of(1.0) == 3);
}

TEST_CASE("Lagrange property and partition of unity") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int degree : {1, 2}) {
    const auto b = PiecewiseBasis::make(degree, 13);
    for (long l = 0; l < b.N; ++l)
      for (long j = 0; j < b.N; ++j) CHECK(basis_eval(b, l, b.node(j)) == doctest::Approx(l == j ? 1.0 : 0.0));
    for (int trial = 0; trial < 100; ++trial) {
      const double t = u(rng);
      double sum = 0.0;
      for (long l = 0; l < b.N; ++l) sum += basis_eval(b, l, t);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  const auto hat = PiecewiseBasis::make(1, 5);
  CHECK(basis_eval(hat, 2, 0.5 * (hat.node(2) + hat.node(3))) == doctest::Approx(0.5));
  CHECK_THROWS_AS(basis_eval(hat, 5, 0.0), std::out_of_range);
}

TEST_CASE("kernel moments match the reference quadrature") {
  std::mt19937_64 rng(2);
  for (int degree : {1, 2}) {
    const auto b = PiecewiseBasis::make(degree, 41);
    const double kappa = 30.0;
    const auto A = assemble_kernel_moments(b, kappa);
    std::uniform_int_distribution<long> idx(0, b.N - 1);
    for (int trial = 0; trial < 20; ++trial) {
      const long j = idx(rng), l = idx(rng);
      CHECK(std::abs(A(j, l) - kernel_moment_oracle(b, l, kappa, b.node(j))) <= 1e-12);
    }
    // Row sums integrate the constant function.
    const PolyExpSum one{{{1.0}, 0.0}};
    for (long j = 0; j < b.N; ++j)
      CHECK(std::abs(A.row(j).sum() - exact_K_polyexp(one, kappa, b.node(j))) <= 1e-12);
  }
}

TEST_CASE("assemble_G and solve") {
  const auto b = PiecewiseBasis::make(1, 21);
  const auto G = assemble_G(b, 0.0, 10.0);
  CHECK((G - CMatrix::Identity(b.N, b.N)).norm() == 0.0);
  std::vector<cplx> f(b.N);
  for (long j = 0; j < b.N; ++j) f[j] = {0.1 * j, -1.0};
  const auto sol = solve_collocation(b, 0.0, 10.0, f);
  for (long j = 0; j < b.N; ++j) CHECK(std::abs(sol.coeffs[j] - f[j]) == 0.0);
  CHECK_THROWS_AS(solve_collocation(b, 0.2, 10.0, std::vector<cplx>(3)), std::invalid_argument);
}

TEST_CASE("eval_collocation") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int degree : {1, 2}) {
    CollocationSolution sol{PiecewiseBasis::make(degree, 25), CVector(25), 1.0};
    for (long j = 0; j < 25; ++j) sol.coeffs[j] = {u(rng), u(rng)};
    for (long j = 0; j < 25; ++j) CHECK(std::abs(eval_collocation(sol, sol.basis.node(j)) - sol.coeffs[j]) < 1e-14);
    for (int trial = 0; trial < 1000; ++trial) {
      const double t = u(rng);
      cplx naive = 0.0;
      for (long l = 0; l < 25; ++l) naive += sol.coeffs[l] * basis_eval(sol.basis, l, t);
      CHECK(std::abs(eval_collocation(sol, t) - naive) <= 1e-13);
    }
    sol.coeffs.setConstant({2.0, -1.0});
    CHECK(std::abs(eval_collocation(sol, u(rng)) - cplx{2.0, -1.0}) < 1e-14);
  }
}

TEST_CASE("benchmark relative errors") {
  const double cm1 = cm_error(1, 100.0, 1);
  const double cm2 = cm_error(2, 100.0, 1);
  CHECK(cm1 == doctest::Approx(1.16e-2).epsilon(0.1));
  CHECK(cm2 == doctest::Approx(1.67e-3).epsilon(0.1));
  const double cm1_fine = cm_error(1, 100.0, 2);
  CHECK(cm1_fine == doctest::Approx(2.94e-3).epsilon(0.1));
  const double ratio = cm1_fine / cm1;
  CHECK(ratio >= 0.2);
  CHECK(ratio <= 0.3);

  for (int degree : {1, 2}) {
    const double e100 = cm_error(degree, 100.0, 1);
    for (double kappa : {150.0, 200.0}) CHECK(std::abs(cm_error(degree, kappa, 1) / e100 - 1.0) < 0.05);
  }
}
