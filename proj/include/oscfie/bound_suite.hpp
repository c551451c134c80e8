#pragma once

// Checks of the a-priori bounds against measured values: the delta-sequence
// sum, the inverse-norm bound and the quadrature error bound.

#include <iosfwd>
#include <string>
#include <vector>

#include "oscfie/polyexp.hpp"

namespace oscfie {

struct BoundCase {
  std::string suite;
  std::string label;  ///< parameter tuple, e.g. "kappa=10;p=60"
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct BoundSuiteOptions {
  int delta_terms = 50;
  cplx lambda{0.2, 0.0};
  double gamma = 6.0;
  double beta = 1.0;
  int q = 1;
  double Gamma = 2.0;
  int m = 2;
  std::vector<double> inv_norm_kappas{1, 2, 5, 10, 25, 50, 100};
  std::vector<double> quadrature_kappas{10, 50, 100};
};

struct BoundReport {
  std::vector<BoundCase> cases;
  bool all_pass() const;
};

BoundReport bound_suite(const BoundSuiteOptions& options = {});

/// CSV with header suite,case,measured,bound,pass.
void write_bound_csv(std::ostream& os, const BoundReport& report);

}  // namespace oscfie
