#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace oscfie {

using cplx = std::complex<double>;
using ComplexFn = std::function<cplx(double)>;

/// p(t) * exp(rate * t) with p given by ascending coefficients.
struct PolyExpTerm {
  std::vector<cplx> coeffs;
  cplx rate{0.0, 0.0};

  cplx operator()(double t) const;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Throws std::invalid_argument on non-finite coefficients or rate.
  void validate() const;
};

using PolyExpSum = std::vector<PolyExpTerm>;

cplx evaluate(std::span<const PolyExpTerm> terms, double t);
ComplexFn as_function(PolyExpSum terms);

/// Moments  int_a^b t^k e^{c t} dt  for k = 0..kmax.
///
/// For |c| max(|a|,|b|) <= 2 the exponential is expanded in its Taylor series
/// (this also covers c == 0 exactly); otherwise the integration-by-parts
/// recursion I_k = [t^k e^{ct}/c]_a^b - (k/c) I_{k-1} is used.
std::vector<cplx> exp_moments(int kmax, cplx c, double a, double b);

/// int_a^b p(t) e^{c t} dt for polynomial p (ascending coefficients).
cplx integrate_poly_exp(std::span<const cplx> coeffs, cplx c, double a, double b);

/// (K y)(s) = int_{-1}^{1} y(t) e^{i kappa |s - t|} dt in closed form.
cplx exact_K_polyexp(std::span<const PolyExpTerm> terms, double kappa, double s);

/// f(s) = y(s) - lambda (K y)(s).
cplx rhs_f(std::span<const PolyExpTerm> solution, cplx lambda, double kappa, double s);

/// ||y||_{L2(-1,1)} from exact antiderivatives of the pairwise products.
double l2_norm(std::span<const PolyExpTerm> terms);

/// The benchmark solution y(s) = s + (3s^2+2s+1) e^{i kappa s} + (s+2) e^{-i kappa s}.
PolyExpSum benchmark_solution(double kappa);

}  // namespace oscfie
