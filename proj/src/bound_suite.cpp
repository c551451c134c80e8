#include "oscfie/bound_suite.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "oscfie/delta_sequence.hpp"
#include "oscfie/discrete_system.hpp"
#include "oscfie/quadrature.hpp"

namespace oscfie {

namespace {

std::string tuple(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, value] : items) {
    if (!first) os << ';';
    os << key << '=' << value;
    first = false;
  }
  return os.str();
}

}  // namespace

bool BoundReport::all_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

BoundReport bound_suite(const BoundSuiteOptions& options) {
  BoundReport report;

  const auto seq = delta_sequence(options.delta_terms);
  report.cases.push_back({"delta", tuple({{"L", options.delta_terms}}), seq.weighted_sum, 1.2,
                          seq.weighted_sum <= 1.2});
  report.cases.push_back({"delta", "4|delta_1|", 4.0 * std::abs(seq.delta.front()), 1.0 / 3.0,
                          seq.delta1_exact == "1/12"});

  const double eta = eta_bound(options.lambda, options.q, options.gamma, options.Gamma);
  const double inv_bound = 1.0 / (1.0 - eta);
  for (double kappa : options.inv_norm_kappas) {
    const auto params = SystemParams::make(options.lambda, kappa, options.gamma, options.beta, options.q);
    const double value = inv_norm(build_M(params));
    report.cases.push_back({"inv_norm", tuple({{"kappa", kappa}, {"N", static_cast<double>(params.N)}}), value,
                            inv_bound, value <= inv_bound});
  }

  const auto probes = default_probe_grid();
  for (double kappa : options.quadrature_kappas) {
    const auto chi = benchmark_oscillatory_sum(kappa, options.Gamma, options.m);
    const auto spec = QuadratureSpec::from_rule(options.gamma, options.beta, kappa);
    const double measured = sup_quad_error(chi, spec, probes);
    const double bound =
        quad_error_bound(chi.r(), chi.tau, chi.Gamma, chi.m, options.gamma, options.beta, kappa);
    report.cases.push_back({"quadrature", tuple({{"kappa", kappa}, {"p", static_cast<double>(spec.p)}}), measured,
                            bound, measured <= bound});
  }
  return report;
}

void write_bound_csv(std::ostream& os, const BoundReport& report) {
  const auto precision = os.precision(17);
  os << "suite,case,measured,bound,pass\n";
  for (const auto& c : report.cases)
    os << c.suite << ',' << c.label << ',' << c.measured << ',' << c.bound << ',' << (c.pass ? 1 : 0) << '\n';
  os.precision(precision);
}

}  // namespace oscfie
