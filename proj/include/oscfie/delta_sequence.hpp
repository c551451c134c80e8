#pragma once

#include <string>
#include <vector>

namespace oscfie {

/// eta_l = 2l / (4^l (2l+1)!),
/// delta_l = eta_l - sum_{b<l} eta_{l-b} delta_b / (2l - 2b),
/// evaluated in exact rationals and then rounded.
struct DeltaSequence {
  std::vector<double> eta;           ///< eta_1..eta_L
  std::vector<double> delta;         ///< delta_1..delta_L
  std::vector<double> partial_sums;  ///< sum_{l<=k} 4^l |delta_l| for k = 1..L
  double weighted_sum = 0.0;         ///< partial_sums.back()
  std::string weighted_sum_exact;    ///< "num/den" in lowest terms
  std::string delta1_exact;          ///< delta_1 as "num/den"
};

/// Throws std::domain_error for L < 1.
DeltaSequence delta_sequence(int L);

}  // namespace oscfie
