#pragma once

// Matrix form of (I - lambda K_p) on the collocation nodes.

#include <iosfwd>
#include <span>
#include <vector>

#include "oscfie/linalg.hpp"
#include "oscfie/polyexp.hpp"
#include "oscfie/quadrature.hpp"

namespace oscfie {

struct SystemParams {
  cplx lambda{0.0, 0.0};
  double kappa = 1.0;
  double gamma = 6.0;
  double beta = 1.0;
  int q = 1;
  long p = 0;              ///< p_kappa(gamma, beta, kappa)
  long N = 0;              ///< q p + 1
  cplx omega{1.0, 0.0};    ///< e^{i 2 kappa / (q p)}

  /// Throws std::domain_error on invalid kappa/gamma/beta or q < 1.
  static SystemParams make(cplx lambda, double kappa, double gamma = 6.0, double beta = 1.0, int q = 1);

  /// x_j = -1 + 2j/(N-1) for 0-based j; x_{q l} coincides with quadrature node s_l.
  double node(long j) const { return -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(N - 1); }
  std::vector<double> nodes() const;
  QuadratureSpec quadrature() const;
  /// Weight of column j in B: 1 at the ends, 2 at interior quadrature nodes, 0 elsewhere.
  int column_weight(long j) const;
};

/// b_{jl} = w_l omega^{|j-l|} with w_l from column_weight.
CMatrix build_B(const SystemParams& params);

/// M = I - (lambda / p) B; immutable once built.
struct SystemMatrix {
  SystemParams params;
  CMatrix entries;

  long size() const { return params.N; }
  CVector apply(const CVector& v) const { return entries * v; }
};

SystemMatrix build_M(const SystemParams& params);

/// [((I - lambda K_p) h)(x_j)]_j evaluated directly from the trapezoid sum on
/// the embedded quadrature nodes. Throws std::invalid_argument unless
/// h_samples.size() == N.
CVector apply_discrete_operator(std::span<const cplx> h_samples, const SystemParams& params);

/// ||M^{-1}||_2 = 1 / sigma_min. Full SVD up to N = 5000, inverse iteration
/// beyond. Throws SingularMatrixError if sigma_min < 1e-13 sigma_max.
double inv_norm(const SystemMatrix& M);

/// eta = 2|lambda| sqrt(q + 1/ceil(gamma)) after checking
///   |lambda| in (0, 1/2), gamma > max{Gamma + 3, 4|lambda|^2 / (1 - 4|lambda|^2)},
///   1 <= q < 1/(4|lambda|^2) - 1/ceil(gamma).
/// Throws std::domain_error naming the violated inequality.
double eta_bound(cplx lambda, int q, double gamma, double Gamma = 0.0);

struct InvNormRecord {
  double kappa = 0.0;
  long N = 0;
  double inv_norm = 0.0;  ///< +inf when singular
  bool singular = false;
};

/// One record per kappa; singular points are flagged instead of aborting.
/// Throws std::invalid_argument if kappas are not ascending.
std::vector<InvNormRecord> inv_norm_sweep(cplx lambda, double gamma, double beta, int q,
                                          std::span<const double> kappas);

/// CSV with header kappa,N,inv_norm,singular_flag.
void write_inv_norm_csv(std::ostream& os, std::span<const InvNormRecord> records);

/// ||h||_N = ||v_h||_2 / sqrt(N).
double seminorm(std::span<const cplx> node_values);
double seminorm(const CVector& node_values);

}  // namespace oscfie
