#include "oscfie/discrete_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oscfie/errors.hpp"

namespace oscfie {

SystemParams SystemParams::make(cplx lambda, double kappa, double gamma, double beta, int q) {
  if (q < 1) throw std::domain_error("SystemParams: q must be >= 1");
  SystemParams params;
  params.lambda = lambda;
  params.kappa = kappa;
  params.gamma = gamma;
  params.beta = beta;
  params.q = q;
  params.p = p_kappa(gamma, beta, kappa);
  params.N = static_cast<long>(q) * params.p + 1;
  params.omega = std::polar(1.0, 2.0 * kappa / static_cast<double>(q * params.p));
  return params;
}

std::vector<double> SystemParams::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(N));
  for (long j = 0; j < N; ++j) out[j] = node(j);
  return out;
}

QuadratureSpec SystemParams::quadrature() const {
  QuadratureSpec spec = QuadratureSpec::with_panels(kappa, p);
  spec.gamma = gamma;
  spec.beta = beta;
  return spec;
}

int SystemParams::column_weight(long j) const {
  if (j == 0 || j == N - 1) return 1;
  return (j % q == 0) ? 2 : 0;
}

CMatrix build_B(const SystemParams& params) {
  const long n = params.N;
  // omega^d from the phase directly rather than by repeated products.
  const double step = 2.0 * params.kappa / static_cast<double>(params.q * params.p);
  std::vector<cplx> powers(static_cast<std::size_t>(n));
  for (long d = 0; d < n; ++d) powers[d] = std::polar(1.0, step * static_cast<double>(d));

  CMatrix B = CMatrix::Zero(n, n);
  for (long l = 0; l < n; ++l) {
    const int w = params.column_weight(l);
    if (w == 0) continue;
    for (long j = 0; j < n; ++j) B(j, l) = static_cast<double>(w) * powers[std::abs(j - l)];
  }
  return B;
}

SystemMatrix build_M(const SystemParams& params) {
  SystemMatrix M{params, build_B(params)};
  M.entries *= -params.lambda / static_cast<double>(params.p);
  M.entries.diagonal().array() += 1.0;
  return M;
}

CVector apply_discrete_operator(std::span<const cplx> h_samples, const SystemParams& params) {
  if (h_samples.size() != static_cast<std::size_t>(params.N)) {
    std::ostringstream msg;
    msg << "apply_discrete_operator: expected " << params.N << " samples, got " << h_samples.size();
    throw std::invalid_argument(msg.str());
  }
  std::vector<cplx> at_quadrature(static_cast<std::size_t>(params.p) + 1);
  for (long l = 0; l <= params.p; ++l) at_quadrature[l] = h_samples[static_cast<std::size_t>(l * params.q)];
  const auto targets = params.nodes();
  const auto Kh = apply_Kp_grid(at_quadrature, params.quadrature(), targets);
  CVector out(params.N);
  for (long j = 0; j < params.N; ++j) out[j] = h_samples[j] - params.lambda * Kh[j];
  return out;
}

double inv_norm(const SystemMatrix& M) {
  const auto& a = M.entries;
  if (a.rows() != a.cols()) throw std::invalid_argument("inv_norm: matrix must be square");
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  if (a.rows() <= 5000) {
    const Eigen::VectorXd s = singular_values(a);
    sigma_max = s[0];
    sigma_min = s[s.size() - 1];
  } else {
    // sqrt(||A||_1 ||A||_inf) bounds sigma_max from above.
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    const double norm_inf = a.cwiseAbs().rowwise().sum().maxCoeff();
    sigma_max = std::sqrt(norm1 * norm_inf);
    sigma_min = smallest_singular_value_inverse_power(a, 1e-10);
  }
  if (sigma_min < 1e-13 * sigma_max) {
    std::ostringstream msg;
    msg << "inv_norm: matrix is numerically singular (sigma_min = " << sigma_min
        << ", sigma_max = " << sigma_max << ")";
    throw SingularMatrixError(msg.str(), sigma_max / sigma_min);
  }
  return 1.0 / sigma_min;
}

double eta_bound(cplx lambda, int q, double gamma, double Gamma) {
  const double mod = std::abs(lambda);
  if (!(mod > 0.0 && mod < 0.5)) throw std::domain_error("eta_bound: requires 0 < |lambda| < 1/2");
  const double four_l2 = 4.0 * mod * mod;
  if (!(gamma > Gamma + 3.0)) throw std::domain_error("eta_bound: requires gamma > Gamma + 3");
  if (!(gamma > four_l2 / (1.0 - four_l2)))
    throw std::domain_error("eta_bound: requires gamma > 4|lambda|^2 / (1 - 4|lambda|^2)");
  const double ceil_gamma = std::ceil(gamma);
  const double q_limit = 1.0 / four_l2 - 1.0 / ceil_gamma;
  if (!(q >= 1 && static_cast<double>(q) < q_limit)) {
    std::ostringstream msg;
    msg << "eta_bound: requires 1 <= q < 1/(4|lambda|^2) - 1/ceil(gamma) = " << q_limit << " (q = " << q << ")";
    throw std::domain_error(msg.str());
  }
  return 2.0 * mod * std::sqrt(static_cast<double>(q) + 1.0 / ceil_gamma);
}

std::vector<InvNormRecord> inv_norm_sweep(cplx lambda, double gamma, double beta, int q,
                                          std::span<const double> kappas) {
  if (!std::is_sorted(kappas.begin(), kappas.end()))
    throw std::invalid_argument("inv_norm_sweep: kappas must be ascending");
  std::vector<InvNormRecord> out;
  out.reserve(kappas.size());
  for (double kappa : kappas) {
    const auto params = SystemParams::make(lambda, kappa, gamma, beta, q);
    InvNormRecord rec{kappa, params.N, 0.0, false};
    try {
      rec.inv_norm = inv_norm(build_M(params));
    } catch (const SingularMatrixError&) {
      rec.inv_norm = std::numeric_limits<double>::infinity();
      rec.singular = true;
    }
    out.push_back(rec);
  }
  return out;
}

void write_inv_norm_csv(std::ostream& os, std::span<const InvNormRecord> records) {
  const auto precision = os.precision(17);
  os << "kappa,N,inv_norm,singular_flag\n";
  for (const auto& r : records) os << r.kappa << ',' << r.N << ',' << r.inv_norm << ',' << (r.singular ? 1 : 0) << '\n';
  os.precision(precision);
}

double seminorm(std::span<const cplx> node_values) {
  if (node_values.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& v : node_values) sum += std::norm(v);
  return std::sqrt(sum / static_cast<double>(node_values.size()));
}

double seminorm(const CVector& node_values) {
  return seminorm(std::span<const cplx>(node_values.data(), static_cast<std::size_t>(node_values.size())));
}

}  // namespace oscfie
