#include "oscfie/delta_sequence.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>

namespace oscfie {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

std::string to_fraction(const cpp_rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace

DeltaSequence delta_sequence(int L) {
  if (L < 1) throw std::domain_error("delta_sequence: L must be >= 1");

  std::vector<cpp_rational> eta(L + 1), delta(L + 1);
  cpp_int factorial = 1;  // (2l+1)!
  cpp_int four_pow = 1;   // 4^l
  for (int l = 1; l <= L; ++l) {
    factorial *= cpp_int(2 * l) * cpp_int(2 * l + 1);
    four_pow *= 4;
    eta[l] = cpp_rational(cpp_int(2 * l), four_pow * factorial);
  }

  DeltaSequence out;
  cpp_rational sum = 0;
  four_pow = 1;
  for (int l = 1; l <= L; ++l) {
    cpp_rational d = eta[l];
    for (int b = 1; b < l; ++b) d -= eta[l - b] * delta[b] / cpp_rational(2 * l - 2 * b);
    delta[l] = d;
    four_pow *= 4;
    sum += cpp_rational(four_pow) * abs(d);
    out.eta.push_back(static_cast<double>(eta[l]));
    out.delta.push_back(static_cast<double>(d));
    out.partial_sums.push_back(static_cast<double>(sum));
  }
  out.weighted_sum = out.partial_sums.back();
  out.weighted_sum_exact = to_fraction(sum);
  out.delta1_exact = to_fraction(delta[1]);
  return out;
}

}  // namespace oscfie
