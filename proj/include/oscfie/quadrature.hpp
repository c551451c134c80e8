#pragma once

// Compound trapezoidal discretization of the oscillatory integral operator
//   (K F)(s) = int_{-1}^{1} F(t) e^{i kappa |s - t|} dt
// together with an independent reference quadrature and the a-priori error
// bounds for the perturbation class of oscillatory functions.

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "oscfie/polyexp.hpp"

namespace oscfie {

/// ceil(gamma * kappa^beta), snapped to the nearest integer when the product
/// is within a few ulps of it so exact-integer arguments never round up.
/// Throws std::domain_error unless gamma > 0, beta >= 1, kappa >= 1.
long p_kappa(double gamma, double beta, double kappa);

struct QuadratureSpec {
  double gamma = 0.0;
  double beta = 0.0;
  double kappa = 1.0;
  long p = 1;
  double h = 2.0;

  /// p = p_kappa(gamma, beta, kappa).
  static QuadratureSpec from_rule(double gamma, double beta, double kappa);
  /// Explicit panel count (convergence studies); gamma/beta are left at 0.
  static QuadratureSpec with_panels(double kappa, long p);

  /// s_j = -1 + 2j/p; s_0 = -1 and s_p = 1 exactly.
  double node(long j) const { return -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(p); }
  std::vector<double> nodes() const;
  /// Trapezoid weight of node j (h/2 at the ends, h inside).
  double weight(long j) const { return (j == 0 || j == p) ? h / 2.0 : h; }

  /// Parameter rule beta >= 1, gamma >= Gamma + 3; throws std::domain_error.
  void check_rule(double Gamma) const;
};

/// (K_p F)(s) with F evaluated at the p+1 quadrature nodes.
cplx apply_Kp(const ComplexFn& F, const QuadratureSpec& spec, double s);

/// Batched K_p from node samples; O(p |targets|).
/// Throws std::invalid_argument if samples.size() != p+1 or a target is outside [-1,1].
std::vector<cplx> apply_Kp_grid(std::span<const cplx> samples, const QuadratureSpec& spec,
                                std::span<const double> targets);

/// Composite Gauss-Legendre reference for (K F)(s), split at t = s, doubling
/// the panel count until successive estimates differ by less than tol.
/// Throws ConvergenceError after max_doublings.
cplx reference_K(const ComplexFn& F, double kappa, double s, double tol, int max_doublings = 14);

/// One term w(s) e^{i alpha kappa s} of an oscillatory sum. The weight is
/// either a polynomial (ascending coefficients) or an arbitrary callable.
struct OscillatoryTerm {
  std::variant<std::vector<cplx>, ComplexFn> weight;
  double alpha = 0.0;
};

/// chi(s) = sum_j w_j(s) e^{i alpha_j kappa s} with derivative bound tau,
/// relaxation factor Gamma and smoothness order m.
struct OscillatorySum {
  std::vector<OscillatoryTerm> terms;
  double kappa = 1.0;
  double tau = 0.0;
  double Gamma = 0.0;
  int m = 1;

  int r() const { return static_cast<int>(terms.size()); }
  bool polynomial() const;
  cplx operator()(double s) const;
  /// Closed-form carrier; only valid when polynomial().
  PolyExpSum as_polyexp() const;
  /// Checks |alpha_j| <= 1 + Gamma, m >= 1, kappa >= 1 and, for polynomial
  /// weights, the derivative bound tau. Throws std::domain_error.
  void validate() const;
};

/// max_{l <= m} sup_{s in [-1,1]} |w^{(l)}(s)| sampled on `grid` equispaced points.
double derivative_sup(std::span<const cplx> coeffs, int m, int grid = 10000);

/// The benchmark solution as an oscillatory sum (r = 3, alphas 0, 1, -1) with
/// tau computed from its polynomial weights.
OscillatorySum benchmark_oscillatory_sum(double kappa, double Gamma, int m);

/// 201 equispaced probes on [-1,1] including both ends.
std::vector<double> default_probe_grid(int count = 201);

/// max over probes of |(K chi)(s) - (K_p chi)(s)|; K is evaluated in closed
/// form for polynomial weights and with reference_K(tol=1e-12) otherwise.
double sup_quad_error(const OscillatorySum& chi, const QuadratureSpec& spec,
                      std::span<const double> probes);

/// 44 r tau / (5 gamma kappa^beta) + 27 r tau (Gamma+3)^m / (5 gamma^m kappa^{m(beta-1)}).
/// Throws std::domain_error unless gamma >= Gamma + 3, beta >= 1, kappa >= 1.
double quad_error_bound(int r, double tau, double Gamma, int m, double gamma, double beta,
                        double kappa);

}  // namespace oscfie
