#include "oscfie/linalg.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "oscfie/errors.hpp"

namespace oscfie {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LuFactors {
  CMatrix lu;
  std::vector<lapack_int> pivots;
};

LuFactors factorize(CMatrix a) {
  const auto n = static_cast<lapack_int>(a.rows());
  LuFactors f{std::move(a), std::vector<lapack_int>(static_cast<std::size_t>(n))};
  const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, f.lu.data(), n, f.pivots.data());
  if (info > 0) {
    std::ostringstream msg;
    msg << "LU factorization: exactly zero pivot at column " << info;
    throw SingularMatrixError(msg.str(), kInf);
  }
  if (info < 0) throw std::invalid_argument("LU factorization: invalid argument");
  return f;
}

void solve_in_place(const LuFactors& f, char trans, CVector& rhs) {
  const auto n = static_cast<lapack_int>(f.lu.rows());
  const lapack_int info =
      LAPACKE_zgetrs(LAPACK_COL_MAJOR, trans, n, 1, f.lu.data(), n, f.pivots.data(), rhs.data(), n);
  if (info != 0) throw std::runtime_error("zgetrs failed");
}

}  // namespace

Eigen::VectorXd singular_values(CMatrix a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  Eigen::VectorXd s(std::min(m, n));
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, a.data(), m, s.data(), nullptr,
                                         1, nullptr, 1);
  if (info != 0) {
    std::ostringstream msg;
    msg << "zgesdd failed with info = " << info;
    throw std::runtime_error(msg.str());
  }
  return s;
}

double smallest_singular_value_inverse_power(const CMatrix& a, double tol, int max_iter) {
  const LuFactors f = factorize(a);
  const auto n = a.rows();
  // Deterministic start with components in every direction.
  CVector x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = std::complex<double>(1.0 + 0.5 * std::sin(1.3 * i), 0.25 * std::cos(0.7 * i));
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    CVector w = x;
    solve_in_place(f, 'C', w);  // A^H z = x
    solve_in_place(f, 'N', w);  // A w = z
    const double growth = w.norm();  // -> 1 / sigma_min^2
    if (!std::isfinite(growth)) throw SingularMatrixError("inverse iteration overflow", kInf);
    if (it > 0 && std::abs(growth - estimate) <= tol * growth) return 1.0 / std::sqrt(growth);
    estimate = growth;
    x = w / growth;
  }
  throw ConvergenceError("inverse iteration did not converge", 1.0 / std::sqrt(estimate), 0.0);
}

LuSolution lu_solve(CMatrix a, const CVector& b) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
  const double anorm = LAPACKE_zlange(LAPACK_COL_MAJOR, '1', n, n, a.data(), n);
  const LuFactors f = factorize(std::move(a));
  double rcond = 0.0;
  if (LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, f.lu.data(), n, anorm, &rcond) != 0)
    throw std::runtime_error("zgecon failed");
  if (rcond < std::numeric_limits<double>::epsilon()) {
    std::ostringstream msg;
    msg << "lu_solve: matrix is numerically singular (condition estimate " << 1.0 / rcond << ")";
    throw SingularMatrixError(msg.str(), 1.0 / rcond);
  }
  LuSolution out{b, rcond};
  solve_in_place(f, 'N', out.x);
  return out;
}

}  // namespace oscfie
