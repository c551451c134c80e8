#pragma once

// Accuracy measures against a known solution: relative L2 error on a fine
// trapezoid grid and per-frequency relative error of the discrete spectrum.

#include <span>
#include <vector>

#include "oscfie/polyexp.hpp"

namespace oscfie {

inline constexpr int kMetricPanels = 20000;

/// s_j = -1 + 2j/panels, j = 0..panels (20001 points by default). This grid
/// is shared by the L2 metric and the FFT metric.
std::vector<double> metric_grid(int panels = kMetricPanels);

/// sqrt(trapezoid of |y - Y|^2 on metric_grid) / ||y||_2 with ||y||_2 in
/// closed form. Y_on_grid must hold Y at metric_grid(panels).
double relative_L2_error(std::span<const cplx> Y_on_grid, std::span<const PolyExpTerm> solution,
                         int panels = kMetricPanels);
double relative_L2_error(const ComplexFn& Y, std::span<const PolyExpTerm> solution, int panels = kMetricPanels);

struct Spectrum {
  std::vector<double> z;     ///< frequency axis, z_j = 0.5 j - 5000.5 for 20001 samples
  std::vector<cplx> values;  ///< fftshifted DFT
};

/// Unnormalized forward DFT of the samples, fftshifted so the zero bin is in
/// the middle; z_k = k / 2 for bin k.
Spectrum spectrum(std::span<const cplx> samples);

struct FftErrorCurve {
  std::vector<double> z;
  std::vector<double> rel_err;  ///< NaN at flagged bins
  std::vector<bool> flagged;    ///< |F(y)(z)| < 1e-12 max |F(y)|
};

/// |F(y) - F(Y)| / |F(y)| per frequency, both sampled on metric_grid.
FftErrorCurve fft_relative_error(std::span<const cplx> Y_on_grid, std::span<const PolyExpTerm> solution);
FftErrorCurve fft_relative_error(const ComplexFn& Y, std::span<const PolyExpTerm> solution);

/// Frequencies |z| in [center - half_width, center + half_width].
struct Band {
  double center = 0.0;
  double half_width = 0.0;
  bool contains(double z) const;
};

/// Band around the peak of e^{+-i kappa s}: center kappa / (2 pi) on the z
/// axis, half width max(2, center / 4).
Band kappa_band(double kappa);

/// Mean relative error over unflagged bins inside band; NaN when none.
double band_mean_error(const FftErrorCurve& curve, const Band& band);

/// Fraction of spectral energy with |z| >= z_min.
double energy_fraction_above(std::span<const cplx> samples, double z_min);

/// sum |F|^2 / n^2 divided by the mean of |x|^2; 1 up to roundoff.
double parseval_ratio(std::span<const cplx> samples);

}  // namespace oscfie
