#include "oscfie/collocation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oscfie/errors.hpp"

namespace oscfie {

namespace {

constexpr cplx kI{0.0, 1.0};

// Local Lagrange polynomial i on reference nodes xi_k = k - degree/2, as
// ascending coefficients in xi.
std::vector<cplx> reference_lagrange(int degree, int i) {
  std::vector<cplx> poly{1.0};
  const double xi_i = i - 0.5 * degree;
  for (int k = 0; k <= degree; ++k) {
    if (k == i) continue;
    const double xi_k = k - 0.5 * degree;
    const double scale = 1.0 / (xi_i - xi_k);
    std::vector<cplx> next(poly.size() + 1, 0.0);
    for (std::size_t c = 0; c < poly.size(); ++c) {
      next[c] += poly[c] * (-xi_k * scale);
      next[c + 1] += poly[c] * scale;
    }
    poly = std::move(next);
  }
  return poly;
}

double lagrange_value(int degree, int i, double xi) {
  double v = 1.0;
  const double xi_i = i - 0.5 * degree;
  for (int k = 0; k <= degree; ++k) {
    if (k == i) continue;
    const double xi_k = k - 0.5 * degree;
    v *= (xi - xi_k) / (xi_i - xi_k);
  }
  return v;
}

}  // namespace

PiecewiseBasis PiecewiseBasis::make(int degree, long N) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("PiecewiseBasis: degree must be 1 or 2");
  if (N < degree + 1) throw std::invalid_argument("PiecewiseBasis: too few nodes");
  if ((N - 1) % degree != 0) throw std::invalid_argument("PiecewiseBasis: N-1 must be divisible by the degree");
  return PiecewiseBasis{degree, N};
}

std::vector<double> PiecewiseBasis::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(N));
  for (long j = 0; j < N; ++j) out[j] = node(j);
  return out;
}

long PiecewiseBasis::element_of(double t) const {
  const double width = spacing() * degree;
  const auto e = static_cast<long>(std::floor((t + 1.0) / width));
  return std::clamp(e, 0L, elements() - 1);
}

double basis_eval(const PiecewiseBasis& basis, long l, double t) {
  if (l < 0 || l >= basis.N) throw std::out_of_range("basis_eval: index out of range");
  if (t < -1.0 || t > 1.0) return 0.0;
  const long e = basis.element_of(t);
  const long first = e * basis.degree;
  const long local = l - first;
  if (local < 0 || local > basis.degree) return 0.0;
  const double mid = basis.node(first) + 0.5 * basis.degree * basis.spacing();
  return lagrange_value(basis.degree, static_cast<int>(local), (t - mid) / basis.spacing());
}

CMatrix assemble_kernel_moments(const PiecewiseBasis& basis, double kappa) {
  const int d = basis.degree;
  const double hn = basis.spacing();
  const double half = 0.5 * d;

  // In the element coordinate xi = (t - mid)/hn every element looks the same,
  // so three families of per-basis integrals cover all (row, element) pairs:
  //   left:  element entirely left of x_j, kernel e^{i kappa (x_j - t)}
  //   right: element entirely right of x_j, kernel e^{i kappa (t - x_j)}
  //   split: x_j is the element midpoint (degree 2 only)
  std::vector<std::vector<cplx>> local(d + 1);
  for (int i = 0; i <= d; ++i) local[i] = reference_lagrange(d, i);
  const cplx c = kI * (kappa * hn);
  std::vector<cplx> left(d + 1), right(d + 1), split(d + 1);
  for (int i = 0; i <= d; ++i) {
    left[i] = hn * integrate_poly_exp(local[i], -c, -half, half);
    right[i] = hn * integrate_poly_exp(local[i], c, -half, half);
    split[i] = hn * (integrate_poly_exp(local[i], -c, -half, 0.0) + integrate_poly_exp(local[i], c, 0.0, half));
  }

  const long n = basis.N;
  const long elements = basis.elements();
  CMatrix A = CMatrix::Zero(n, n);
  for (long j = 0; j < n; ++j) {
    for (long e = 0; e < elements; ++e) {
      const long first = e * d;
      // Offset of x_j from the element midpoint in units of hn.
      const double offset = static_cast<double>(j - first) - half;
      const std::vector<cplx>* weights = nullptr;
      if (offset >= half) {
        weights = &left;
      } else if (offset <= -half) {
        weights = &right;
      } else {
        weights = &split;
      }
      const cplx phase = std::polar(1.0, kappa * hn * std::abs(offset));
      for (int i = 0; i <= d; ++i) A(j, first + i) += phase * (*weights)[i];
    }
  }
  return A;
}

CMatrix assemble_G(const PiecewiseBasis& basis, cplx lambda, double kappa) {
  CMatrix G = assemble_kernel_moments(basis, kappa);
  G *= -lambda;
  G.diagonal().array() += 1.0;
  return G;
}

CollocationSolution solve_collocation(const PiecewiseBasis& basis, cplx lambda, double kappa,
                                      std::span<const cplx> f_values) {
  if (f_values.size() != static_cast<std::size_t>(basis.N)) {
    std::ostringstream msg;
    msg << "solve_collocation: expected " << basis.N << " right-hand side values, got " << f_values.size();
    throw std::invalid_argument(msg.str());
  }
  CVector f(basis.N);
  for (long j = 0; j < basis.N; ++j) f[j] = f_values[j];
  if (lambda == cplx{0.0, 0.0}) return CollocationSolution{basis, f, 1.0};
  auto solved = lu_solve(assemble_G(basis, lambda, kappa), f);
  return CollocationSolution{basis, std::move(solved.x), solved.rcond};
}

cplx eval_collocation(const CollocationSolution& sol, double t) {
  const auto& basis = sol.basis;
  const long e = basis.element_of(t);
  const long first = e * basis.degree;
  const double mid = basis.node(first) + 0.5 * basis.degree * basis.spacing();
  const double xi = (t - mid) / basis.spacing();
  cplx acc{0.0, 0.0};
  for (int i = 0; i <= basis.degree; ++i) acc += sol.coeffs[first + i] * lagrange_value(basis.degree, i, xi);
  return acc;
}

}  // namespace oscfie
