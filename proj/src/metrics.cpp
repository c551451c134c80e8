#include "oscfie/metrics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oscfie {

namespace {

std::vector<cplx> sample(const ComplexFn& Y, const std::vector<double>& grid) {
  std::vector<cplx> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = Y(grid[j]);
  return out;
}

std::vector<cplx> sample(std::span<const PolyExpTerm> terms, const std::vector<double>& grid) {
  std::vector<cplx> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = evaluate(terms, grid[j]);
  return out;
}

std::vector<cplx> dft(std::span<const cplx> samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<cplx> in(samples.begin(), samples.end());
  std::vector<cplx> out(samples.size());
  fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("fftw: plan creation failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::vector<double> metric_grid(int panels) {
  if (panels < 1) throw std::invalid_argument("metric_grid: panels must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(panels) + 1);
  for (int j = 0; j <= panels; ++j) grid[j] = -1.0 + 2.0 * j / panels;
  return grid;
}

double relative_L2_error(std::span<const cplx> Y_on_grid, std::span<const PolyExpTerm> solution, int panels) {
  if (Y_on_grid.size() != static_cast<std::size_t>(panels) + 1)
    throw std::invalid_argument("relative_L2_error: expected panels+1 samples");
  const auto grid = metric_grid(panels);
  const double h = 2.0 / panels;
  double sum = 0.0;
  for (int j = 0; j <= panels; ++j) {
    const double w = (j == 0 || j == panels) ? 0.5 : 1.0;
    sum += w * std::norm(evaluate(solution, grid[j]) - Y_on_grid[j]);
  }
  return std::sqrt(h * sum) / l2_norm(solution);
}

double relative_L2_error(const ComplexFn& Y, std::span<const PolyExpTerm> solution, int panels) {
  const auto values = sample(Y, metric_grid(panels));
  return relative_L2_error(values, solution, panels);
}

Spectrum spectrum(std::span<const cplx> samples) {
  if (samples.empty()) throw std::invalid_argument("spectrum: no samples");
  const auto raw = dft(samples);
  const long n = static_cast<long>(raw.size());
  const long neg = n / 2;  // bins -neg .. n-1-neg
  Spectrum s;
  s.z.resize(raw.size());
  s.values.resize(raw.size());
  for (long i = 0; i < n; ++i) {
    const long k = i - neg;
    s.z[i] = 0.5 * static_cast<double>(k);
    s.values[i] = raw[static_cast<std::size_t>((k + n) % n)];
  }
  return s;
}

FftErrorCurve fft_relative_error(std::span<const cplx> Y_on_grid, std::span<const PolyExpTerm> solution) {
  const auto grid = metric_grid(static_cast<int>(Y_on_grid.size()) - 1);
  const auto exact = spectrum(sample(solution, grid));
  const auto approx = spectrum(Y_on_grid);
  double peak = 0.0;
  for (const auto& v : exact.values) peak = std::max(peak, std::abs(v));
  FftErrorCurve curve;
  curve.z = exact.z;
  curve.rel_err.resize(curve.z.size());
  curve.flagged.resize(curve.z.size());
  for (std::size_t i = 0; i < curve.z.size(); ++i) {
    const double denom = std::abs(exact.values[i]);
    curve.flagged[i] = denom < 1e-12 * peak;
    curve.rel_err[i] = curve.flagged[i] ? std::numeric_limits<double>::quiet_NaN()
                                        : std::abs(exact.values[i] - approx.values[i]) / denom;
  }
  return curve;
}

FftErrorCurve fft_relative_error(const ComplexFn& Y, std::span<const PolyExpTerm> solution) {
  const auto values = sample(Y, metric_grid());
  return fft_relative_error(values, solution);
}

bool Band::contains(double z) const { return std::abs(std::abs(z) - center) <= half_width; }

Band kappa_band(double kappa) {
  const double center = kappa / (2.0 * M_PI);
  return {center, std::max(2.0, center / 4.0)};
}

double band_mean_error(const FftErrorCurve& curve, const Band& band) {
  double sum = 0.0;
  long count = 0;
  for (std::size_t i = 0; i < curve.z.size(); ++i) {
    if (curve.flagged[i] || !band.contains(curve.z[i])) continue;
    sum += curve.rel_err[i];
    ++count;
  }
  return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

double energy_fraction_above(std::span<const cplx> samples, double z_min) {
  const auto s = spectrum(samples);
  double total = 0.0, above = 0.0;
  for (std::size_t i = 0; i < s.z.size(); ++i) {
    const double e = std::norm(s.values[i]);
    total += e;
    if (std::abs(s.z[i]) >= z_min) above += e;
  }
  return total > 0.0 ? above / total : 0.0;
}

double parseval_ratio(std::span<const cplx> samples) {
  const auto s = spectrum(samples);
  const double n = static_cast<double>(samples.size());
  double freq = 0.0, time = 0.0;
  for (const auto& v : s.values) freq += std::norm(v);
  for (const auto& v : samples) time += std::norm(v);
  return (freq / (n * n)) / (time / n);
}

}  // namespace oscfie
