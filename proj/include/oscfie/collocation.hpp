#pragma once

// Collocation with continuous piecewise-linear (degree 1) or piecewise-quadratic
// (degree 2) Lagrange bases on equispaced nodes. The kernel moments of every
// basis function are integrated in closed form.

#include <span>
#include <vector>

#include "oscfie/linalg.hpp"
#include "oscfie/polyexp.hpp"

namespace oscfie {

struct PiecewiseBasis {
  int degree = 1;
  long N = 2;  ///< number of nodes x_0..x_{N-1}

  /// Throws std::invalid_argument unless degree in {1,2}, N >= degree+1 and
  /// (N-1) divisible by degree.
  static PiecewiseBasis make(int degree, long N);

  double spacing() const { return 2.0 / static_cast<double>(N - 1); }
  double node(long j) const { return -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(N - 1); }
  std::vector<double> nodes() const;
  long elements() const { return (N - 1) / degree; }
  /// Element containing t (the left one at shared boundaries, clamped to the last).
  long element_of(double t) const;
};

/// phi_l(t) for 0-based l. Throws std::out_of_range for l outside [0, N).
double basis_eval(const PiecewiseBasis& basis, long l, double t);

/// G_{jl} = phi_l(x_j) - lambda int phi_l(t) e^{i kappa |x_j - t|} dt.
CMatrix assemble_G(const PiecewiseBasis& basis, cplx lambda, double kappa);

/// Integral part alone: A_{jl} = int phi_l(t) e^{i kappa |x_j - t|} dt.
CMatrix assemble_kernel_moments(const PiecewiseBasis& basis, double kappa);

struct CollocationSolution {
  PiecewiseBasis basis;
  CVector coeffs;
  double rcond = 0.0;  ///< reciprocal condition estimate of G
};

/// Solves G t = f with partial pivoting. Throws SingularMatrixError (carrying
/// the condition estimate) or std::invalid_argument on a length mismatch.
CollocationSolution solve_collocation(const PiecewiseBasis& basis, cplx lambda, double kappa,
                                      std::span<const cplx> f_values);

/// sum_j t_j phi_j(t), touching only the degree+1 functions of t's element.
cplx eval_collocation(const CollocationSolution& sol, double t);

}  // namespace oscfie
