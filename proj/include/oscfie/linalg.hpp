#pragma once

#include <Eigen/Dense>
#include <complex>

namespace oscfie {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Singular values in descending order (LAPACK zgesdd, values only).
Eigen::VectorXd singular_values(CMatrix a);

/// Smallest singular value by inverse iteration on A^H A using one LU
/// factorization. Throws SingularMatrixError if the factorization breaks down
/// and ConvergenceError if the relative change stays above tol.
double smallest_singular_value_inverse_power(const CMatrix& a, double tol = 1e-10,
                                             int max_iter = 5000);

struct LuSolution {
  CVector x;
  double rcond = 0.0;  ///< reciprocal 1-norm condition estimate
};

/// Dense solve with partial pivoting (zgetrf/zgecon/zgetrs). Throws
/// SingularMatrixError when a pivot vanishes or rcond < machine epsilon.
LuSolution lu_solve(CMatrix a, const CVector& b);

}  // namespace oscfie
