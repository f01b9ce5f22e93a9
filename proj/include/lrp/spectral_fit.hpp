#pragma once

#include <cstdint>
#include <span>

#include "lrp/heat_kernel.hpp"

namespace lrp {

struct FitOptions {
  double exit_mass_cap = 1e-3;
  bool dyadic_only = true;  // use only t = 2^k inside the window
};

struct SpectralFit {
  double gamma = 0;
  double gamma_stderr = 0;
  double d_s = 0;
  double r2 = 0;
  std::int64_t t_min = 0;  // smallest and largest t actually used
  std::int64_t t_max = 0;
  std::size_t points = 0;
};

// Weighted least squares of log p on log t over [t_min, t_max]; gamma = -slope, d_s = 2 gamma.
SpectralFit fit_spectral_dimension(std::span<const std::int64_t> times, std::span<const double> values,
                                   std::span<const double> stderrs, std::span<const double> exit_mass,
                                   std::int64_t t_min, std::int64_t t_max, const FitOptions& options = {});
SpectralFit fit_spectral_dimension(const HeatKernelSeries& series, std::int64_t t_min, std::int64_t t_max,
                                   const FitOptions& options = {});
SpectralFit fit_spectral_dimension(const AnnealedCurve& curve, std::int64_t t_min, std::int64_t t_max,
                                   const FitOptions& options = {});

// Predicted spectral dimension; returns false for the open case d = 1, s = 2.
bool target_spectral_dimension(int d, double s, double& d_s);

}  // namespace lrp
