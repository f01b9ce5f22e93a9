#pragma once

#include <cstdint>
#include <span>

namespace lrp {

struct Interval {
  double lo = 0;
  double hi = 0;
};

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

struct MeanStat {
  double mean = 0;
  double sd = 0;
  double stderr_ = 0;
  std::int64_t count = 0;
};

// Compensated mean and sample standard deviation.
MeanStat mean_stat(std::span<const double> xs);
double compensated_sum(std::span<const double> xs);

struct LineFit {
  double intercept = 0;
  double slope = 0;
  double slope_stderr = 0;
  double r2 = 0;
};

// Weighted least squares y ~ a + b x; empty weights means uniform.
LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w = {});

}  // namespace lrp
