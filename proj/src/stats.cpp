#include "lrp/stats.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lrp/error.hpp"

namespace lrp {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  require(trials > 0, "wilson_interval: no trials");
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double compensated_sum(std::span<const double> xs) {
  double sum = 0, c = 0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

MeanStat mean_stat(std::span<const double> xs) {
  MeanStat m;
  m.count = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return m;
  m.mean = compensated_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m.mean) * (xs[i] - m.mean);
  m.sd = std::sqrt(compensated_sum(sq) / static_cast<double>(xs.size() - 1));
  m.stderr_ = m.sd / std::sqrt(static_cast<double>(xs.size()));
  return m;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  require(n >= 2 && y.size() == x.size(), "fit_line: need two or more points");
  require(w.empty() || w.size() == x.size(), "fit_line: weight count mismatch");
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Y(n), W(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = x[i];
    Y[i] = y[i];
    W[i] = w.empty() ? 1.0 : w[i];
  }
  const Eigen::MatrixXd XtW = X.transpose() * W.asDiagonal();
  const Eigen::Matrix2d normal = XtW * X;
  const Eigen::Vector2d beta = normal.ldlt().solve(XtW * Y);
  const Eigen::VectorXd resid = Y - X * beta;
  const double ybar = W.dot(Y) / W.sum();
  const double ss_res = (W.array() * resid.array().square()).sum();
  const double ss_tot = (W.array() * (Y.array() - ybar).square()).sum();
  LineFit fit;
  fit.intercept = beta[0];
  fit.slope = beta[1];
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (n > 2) {
    const double sigma2 = ss_res / static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(std::max(0.0, sigma2 * normal.inverse()(1, 1)));
  }
  return fit;
}

}  // namespace lrp
