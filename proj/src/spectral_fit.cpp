#include "lrp/spectral_fit.hpp"

#include <cmath>
#include <vector>

#include "lrp/error.hpp"
#include "lrp/stats.hpp"

namespace lrp {

SpectralFit fit_spectral_dimension(std::span<const std::int64_t> times, std::span<const double> values,
                                   std::span<const double> stderrs, std::span<const double> exit_mass,
                                   std::int64_t t_min, std::int64_t t_max, const FitOptions& options) {
  require(times.size() == values.size(), "fit: times and values differ in length");
  require(t_min >= 1 && t_max >= t_min, "fit: bad window");
  std::vector<double> x, y, w;
  bool weighted = !stderrs.empty();
  SpectralFit fit;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto t = times[i];
    if (t < t_min || t > t_max) continue;
    if (options.dyadic_only && (t & (t - 1)) != 0) continue;
    if (!exit_mass.empty() && exit_mass[i] > options.exit_mass_cap) continue;
    if (!(values[i] > 0)) fail(ErrorKind::invalid_argument, "fit: non-positive value at t=" + std::to_string(t));
    x.push_back(std::log(static_cast<double>(t)));
    y.push_back(std::log(values[i]));
    if (weighted) {
      if (stderrs[i] > 0)
        w.push_back(std::pow(values[i] / stderrs[i], 2));
      else
        weighted = false;
    }
    fit.t_min = fit.points == 0 ? t : fit.t_min;
    fit.t_max = t;
    ++fit.points;
  }
  if (x.size() < 4) fail(ErrorKind::precondition, "fit: fewer than 4 usable points in window");
  if (!weighted) w.clear();
  const auto line = fit_line(x, y, w);
  fit.gamma = -line.slope;
  fit.gamma_stderr = line.slope_stderr;
  fit.d_s = 2.0 * fit.gamma;
  fit.r2 = line.r2;
  return fit;
}

SpectralFit fit_spectral_dimension(const HeatKernelSeries& series, std::int64_t t_min, std::int64_t t_max,
                                   const FitOptions& options) {
  return fit_spectral_dimension(series.times, series.values, series.stderr_, series.exit_mass, t_min, t_max,
                                options);
}

SpectralFit fit_spectral_dimension(const AnnealedCurve& curve, std::int64_t t_min, std::int64_t t_max,
                                   const FitOptions& options) {
  return fit_spectral_dimension(curve.times, curve.mean, curve.stderr_, curve.exit_mass, t_min, t_max, options);
}

bool target_spectral_dimension(int d, double s, double& d_s) {
  const double lo = std::min(d + 2.0, 2.0 * d);
  if (d == 1 && std::abs(s - 2.0) < 1e-12) return false;
  if (s > d && s < lo) {
    d_s = 2.0 * d / (s - d);
    return true;
  }
  d_s = d;
  return s >= lo;
}

}  // namespace lrp
