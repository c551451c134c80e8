#include "oscfie/polyexp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscfie {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx horner(std::span<const cplx> coeffs, double t) {
  cplx acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<cplx> taylor_moments(int kmax, cplx c, double a, double b) {
  std::vector<cplx> out(kmax + 1, cplx{0.0, 0.0});
  for (int k = 0; k <= kmax; ++k) {
    cplx sum{0.0, 0.0};
    cplx coef{1.0, 0.0};  // c^n / n!
    const double reach = std::max(std::abs(a), std::abs(b));
    double pa = std::pow(a, k + 1);
    double pb = std::pow(b, k + 1);
    double pr = std::pow(reach, k + 1);
    for (int n = 0; n < 200; ++n) {
      sum += coef * ((pb - pa) / static_cast<double>(k + n + 1));
      // Majorant of the remaining terms; individual terms vanish by symmetry.
      const double bound = 2.0 * std::abs(coef) * pr;
      if (n > 2 && bound <= 1e-18 * std::max(std::abs(sum), 1e-300)) break;
      coef *= c / static_cast<double>(n + 1);
      pa *= a;
      pb *= b;
      pr *= reach;
      if (coef == cplx{0.0, 0.0}) break;
    }
    out[k] = sum;
  }
  return out;
}

std::vector<cplx> recursive_moments(int kmax, cplx c, double a, double b) {
  std::vector<cplx> out(kmax + 1);
  const cplx ea = std::exp(c * a);
  const cplx eb = std::exp(c * b);
  out[0] = (eb - ea) / c;
  double pa = 1.0;
  double pb = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    pa *= a;
    pb *= b;
    out[k] = (pb * eb - pa * ea) / c - (static_cast<double>(k) / c) * out[k - 1];
  }
  return out;
}

// Product of two ascending coefficient vectors.
std::vector<cplx> poly_mul(std::span<const cplx> p, std::span<const cplx> q) {
  if (p.empty() || q.empty()) return {};
  std::vector<cplx> r(p.size() + q.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

}  // namespace

cplx PolyExpTerm::operator()(double t) const {
  if (coeffs.empty()) return {0.0, 0.0};
  return horner(coeffs, t) * std::exp(rate * t);
}

void PolyExpTerm::validate() const {
  auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!finite(rate)) throw std::invalid_argument("PolyExpTerm: non-finite rate");
  for (const auto& c : coeffs)
    if (!finite(c)) throw std::invalid_argument("PolyExpTerm: non-finite coefficient");
}

cplx evaluate(std::span<const PolyExpTerm> terms, double t) {
  cplx acc{0.0, 0.0};
  for (const auto& term : terms) acc += term(t);
  return acc;
}

ComplexFn as_function(PolyExpSum terms) {
  return [terms = std::move(terms)](double t) { return evaluate(terms, t); };
}

std::vector<cplx> exp_moments(int kmax, cplx c, double a, double b) {
  if (kmax < 0) return {};
  const double reach = std::max({std::abs(a), std::abs(b), 1e-300});
  if (std::abs(c) * reach <= 2.0) return taylor_moments(kmax, c, a, b);
  return recursive_moments(kmax, c, a, b);
}

cplx integrate_poly_exp(std::span<const cplx> coeffs, cplx c, double a, double b) {
  if (coeffs.empty() || a == b) return {0.0, 0.0};
  const auto moments = exp_moments(static_cast<int>(coeffs.size()) - 1, c, a, b);
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs.size(); ++k) acc += coeffs[k] * moments[k];
  return acc;
}

cplx exact_K_polyexp(std::span<const PolyExpTerm> terms, double kappa, double s) {
  // Split at t = s: |s - t| = s - t on [-1, s] and t - s on [s, 1].
  const cplx ik = kI * kappa;
  cplx left{0.0, 0.0};
  cplx right{0.0, 0.0};
  for (const auto& term : terms) {
    left += integrate_poly_exp(term.coeffs, term.rate - ik, -1.0, s);
    right += integrate_poly_exp(term.coeffs, term.rate + ik, s, 1.0);
  }
  return std::exp(ik * s) * left + std::exp(-ik * s) * right;
}

cplx rhs_f(std::span<const PolyExpTerm> solution, cplx lambda, double kappa, double s) {
  const cplx y = evaluate(solution, s);
  if (lambda == cplx{0.0, 0.0}) return y;
  return y - lambda * exact_K_polyexp(solution, kappa, s);
}

double l2_norm(std::span<const PolyExpTerm> terms) {
  // |y|^2 = sum_{j,k} p_j conj(p_k) e^{(b_j + conj(b_k)) t}.
  double total = 0.0;
  for (const auto& tj : terms) {
    for (const auto& tk : terms) {
      std::vector<cplx> conj_k(tk.coeffs.size());
      std::transform(tk.coeffs.begin(), tk.coeffs.end(), conj_k.begin(),
                     [](cplx z) { return std::conj(z); });
      const auto prod = poly_mul(tj.coeffs, conj_k);
      total += integrate_poly_exp(prod, tj.rate + std::conj(tk.rate), -1.0, 1.0).real();
    }
  }
  return std::sqrt(std::max(total, 0.0));
}

PolyExpSum benchmark_solution(double kappa) {
  return {
      PolyExpTerm{{0.0, 1.0}, 0.0},
      PolyExpTerm{{1.0, 2.0, 3.0}, kI * kappa},
      PolyExpTerm{{2.0, 1.0}, -kI * kappa},
  };
}

}  // namespace oscfie
