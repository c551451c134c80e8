#include "oscfie/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "oscfie/errors.hpp"

namespace oscfie {

long p_kappa(double gamma, double beta, double kappa) {
  if (!(gamma > 0.0)) throw std::domain_error("p_kappa: gamma must be positive");
  if (!(beta >= 1.0)) throw std::domain_error("p_kappa: beta must be >= 1");
  if (!(kappa >= 1.0)) throw std::domain_error("p_kappa: kappa must be >= 1");
  const double x = gamma * std::pow(kappa, beta);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x))
    return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(x));
}

QuadratureSpec QuadratureSpec::from_rule(double gamma, double beta, double kappa) {
  QuadratureSpec spec;
  spec.gamma = gamma;
  spec.beta = beta;
  spec.kappa = kappa;
  spec.p = p_kappa(gamma, beta, kappa);
  spec.h = 2.0 / static_cast<double>(spec.p);
  return spec;
}

QuadratureSpec QuadratureSpec::with_panels(double kappa, long p) {
  if (p < 1) throw std::domain_error("QuadratureSpec: p must be >= 1");
  QuadratureSpec spec;
  spec.kappa = kappa;
  spec.p = p;
  spec.h = 2.0 / static_cast<double>(p);
  return spec;
}

std::vector<double> QuadratureSpec::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(p) + 1);
  for (long j = 0; j <= p; ++j) out[j] = node(j);
  return out;
}

void QuadratureSpec::check_rule(double Gamma) const {
  if (!(beta >= 1.0)) throw std::domain_error("parameter rule violated: beta >= 1");
  if (!(gamma >= Gamma + 3.0)) throw std::domain_error("parameter rule violated: gamma >= Gamma + 3");
}

cplx apply_Kp(const ComplexFn& F, const QuadratureSpec& spec, double s) {
  cplx acc{0.0, 0.0};
  for (long j = 0; j <= spec.p; ++j) {
    const double sj = spec.node(j);
    acc += spec.weight(j) * F(sj) * std::polar(1.0, spec.kappa * std::abs(s - sj));
  }
  return acc;
}

std::vector<cplx> apply_Kp_grid(std::span<const cplx> samples, const QuadratureSpec& spec,
                                std::span<const double> targets) {
  if (samples.size() != static_cast<std::size_t>(spec.p) + 1) {
    std::ostringstream msg;
    msg << "apply_Kp_grid: expected " << spec.p + 1 << " samples, got " << samples.size();
    throw std::invalid_argument(msg.str());
  }
  const auto nodes = spec.nodes();
  std::vector<cplx> weighted(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) weighted[j] = spec.weight(static_cast<long>(j)) * samples[j];

  std::vector<cplx> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double s = targets[t];
    if (!(s >= -1.0 && s <= 1.0)) throw std::invalid_argument("apply_Kp_grid: target outside [-1,1]");
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < nodes.size(); ++j)
      acc += weighted[j] * std::polar(1.0, spec.kappa * std::abs(s - nodes[j]));
    out[t] = acc;
  }
  return out;
}

namespace {

using Gauss10 = boost::math::quadrature::gauss<double, 10>;

// Composite 10-point Gauss-Legendre on [a, b] with `panels` equal panels.
cplx composite_gauss(const ComplexFn& F, double kappa, double s, double a, double b, long panels) {
  const auto& abscissa = Gauss10::abscissa();
  const auto& weights = Gauss10::weights();
  const double width = (b - a) / static_cast<double>(panels);
  cplx acc{0.0, 0.0};
  auto integrand = [&](double t) { return F(t) * std::polar(1.0, kappa * std::abs(s - t)); };
  for (long k = 0; k < panels; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double mid = lo + 0.5 * width;
    const double half = 0.5 * width;
    cplx panel{0.0, 0.0};
    // Boost stores the non-negative half of a symmetric rule; abscissa[0] is 0 for odd orders only.
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      const double x = abscissa[i];
      if (x == 0.0) {
        panel += weights[i] * integrand(mid);
      } else {
        panel += weights[i] * (integrand(mid - half * x) + integrand(mid + half * x));
      }
    }
    acc += half * panel;
  }
  return acc;
}

cplx reference_estimate(const ComplexFn& F, double kappa, double s, long level) {
  const double wavelength = 2.0 * std::numbers::pi / kappa;
  cplx total{0.0, 0.0};
  for (auto [a, b] : {std::pair{-1.0, s}, std::pair{s, 1.0}}) {
    const double len = b - a;
    if (len <= 0.0) continue;
    const long base = std::max<long>(1, static_cast<long>(std::ceil(len / wavelength)));
    total += composite_gauss(F, kappa, s, a, b, base << level);
  }
  return total;
}

}  // namespace

cplx reference_K(const ComplexFn& F, double kappa, double s, double tol, int max_doublings) {
  if (!(tol > 0.0)) throw std::invalid_argument("reference_K: tol must be positive");
  cplx previous = reference_estimate(F, kappa, s, 0);
  for (int level = 1; level <= max_doublings; ++level) {
    const cplx current = reference_estimate(F, kappa, s, level);
    if (std::abs(current - previous) < tol) return current;
    if (level == max_doublings) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "reference_K: no convergence after " << max_doublings << " doublings; last " << current
          << ", previous " << previous;
      throw ConvergenceError(msg.str(), std::abs(current), std::abs(previous));
    }
    previous = current;
  }
  return previous;
}

bool OscillatorySum::polynomial() const {
  return std::all_of(terms.begin(), terms.end(), [](const OscillatoryTerm& t) {
    return std::holds_alternative<std::vector<cplx>>(t.weight);
  });
}

cplx OscillatorySum::operator()(double s) const {
  cplx acc{0.0, 0.0};
  for (const auto& term : terms) {
    cplx w;
    if (const auto* coeffs = std::get_if<std::vector<cplx>>(&term.weight)) {
      w = PolyExpTerm{*coeffs, 0.0}(s);
    } else {
      w = std::get<ComplexFn>(term.weight)(s);
    }
    acc += w * std::polar(1.0, term.alpha * kappa * s);
  }
  return acc;
}

PolyExpSum OscillatorySum::as_polyexp() const {
  if (!polynomial()) throw std::logic_error("OscillatorySum: weights are not polynomial");
  PolyExpSum out;
  out.reserve(terms.size());
  for (const auto& term : terms)
    out.push_back(PolyExpTerm{std::get<std::vector<cplx>>(term.weight), cplx{0.0, term.alpha * kappa}});
  return out;
}

void OscillatorySum::validate() const {
  if (!(kappa >= 1.0)) throw std::domain_error("OscillatorySum: kappa must be >= 1");
  if (m < 1) throw std::domain_error("OscillatorySum: m must be >= 1");
  if (!(tau > 0.0)) throw std::domain_error("OscillatorySum: tau must be positive");
  if (!(Gamma >= 0.0)) throw std::domain_error("OscillatorySum: Gamma must be >= 0");
  for (const auto& term : terms) {
    if (std::abs(term.alpha) > 1.0 + Gamma)
      throw std::domain_error("OscillatorySum: |alpha| exceeds 1 + Gamma");
    if (const auto* coeffs = std::get_if<std::vector<cplx>>(&term.weight)) {
      const double sup = derivative_sup(*coeffs, m);
      if (sup > tau * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "OscillatorySum: derivative bound " << sup << " exceeds tau = " << tau;
        throw std::domain_error(msg.str());
      }
    }
  }
}

double derivative_sup(std::span<const cplx> coeffs, int m, int grid) {
  std::vector<cplx> d(coeffs.begin(), coeffs.end());
  double sup = 0.0;
  for (int l = 0; l <= m; ++l) {
    if (d.empty()) break;
    for (int i = 0; i < grid; ++i) {
      const double s = -1.0 + 2.0 * i / static_cast<double>(grid - 1);
      sup = std::max(sup, std::abs(PolyExpTerm{d, 0.0}(s)));
    }
    // Differentiate.
    std::vector<cplx> next;
    for (std::size_t k = 1; k < d.size(); ++k) next.push_back(d[k] * static_cast<double>(k));
    d = std::move(next);
  }
  return sup;
}

OscillatorySum benchmark_oscillatory_sum(double kappa, double Gamma, int m) {
  OscillatorySum chi;
  chi.kappa = kappa;
  chi.Gamma = Gamma;
  chi.m = m;
  for (const auto& term : benchmark_solution(kappa))
    chi.terms.push_back(OscillatoryTerm{term.coeffs, term.rate.imag() / kappa});
  for (const auto& term : chi.terms)
    chi.tau = std::max(chi.tau, derivative_sup(std::get<std::vector<cplx>>(term.weight), m));
  return chi;
}

std::vector<double> default_probe_grid(int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = -1.0 + 2.0 * i / static_cast<double>(count - 1);
  return out;
}

double sup_quad_error(const OscillatorySum& chi, const QuadratureSpec& spec,
                      std::span<const double> probes) {
  if (probes.empty()) throw std::invalid_argument("sup_quad_error: empty probe grid");
  const ComplexFn F = [&chi](double t) { return chi(t); };
  std::optional<PolyExpSum> closed;
  if (chi.polynomial()) closed = chi.as_polyexp();
  double worst = 0.0;
  for (double s : probes) {
    if (!(s >= -1.0 && s <= 1.0)) throw std::invalid_argument("sup_quad_error: probe outside [-1,1]");
    const cplx exact = closed ? exact_K_polyexp(*closed, chi.kappa, s) : reference_K(F, chi.kappa, s, 1e-12);
    worst = std::max(worst, std::abs(exact - apply_Kp(F, spec, s)));
  }
  return worst;
}

double quad_error_bound(int r, double tau, double Gamma, int m, double gamma, double beta,
                        double kappa) {
  if (!(beta >= 1.0)) throw std::domain_error("quad_error_bound: beta must be >= 1");
  if (!(gamma >= Gamma + 3.0)) throw std::domain_error("quad_error_bound: gamma must be >= Gamma + 3");
  if (!(kappa >= 1.0)) throw std::domain_error("quad_error_bound: kappa must be >= 1");
  const double first = 44.0 * r * tau / (5.0 * gamma * std::pow(kappa, beta));
  const double second = 27.0 * r * tau * std::pow(Gamma + 3.0, m) /
                        (5.0 * std::pow(gamma, m) * std::pow(kappa, m * (beta - 1.0)));
  return first + second;
}

}  // namespace oscfie
