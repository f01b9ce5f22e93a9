#include "lrp/model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lrp/error.hpp"

namespace lrp {

double edge_probability(const LrpParams& params, const Point& v) {
  bool zero = true;
  for (int i = 0; i < params.d; ++i) zero = zero && v[i] == 0;
  require(!zero, "edge_probability: zero displacement");
  require(params.s > 0, "edge_probability: s must be positive");
  if (is_unit(v, params.d)) return params.q;
  if (!params.long_range_enabled) return 0.0;
  return long_range_probability(norm_of(v, params.d, params.norm), params.s);
}

namespace {

double smooth_step(double u) {
  if (u <= 1.0) return 1.0;
  if (u >= 2.0) return 0.0;
  const double t = u - 1.0;
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / t);
  return a / (a + b);
}

double kind_value(double p, SumKind kind) { return kind == SumKind::probability ? p : p * (1.0 - p); }

// Power series of the summand in x = r^{-s}.
std::vector<double> series_coefficients(SumKind kind) {
  std::vector<double> a(40, 0.0);
  double fact = 1.0;
  for (int k = 1; k < 40; ++k) {
    fact *= k;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    a[k] = kind == SumKind::probability ? sign / fact : sign * (std::ldexp(1.0, k) - 1.0) / fact;
  }
  return a;
}

// Radial weight: euclidean -> omega_d r^{d-1}; linf -> (2r+1)^d - (2r-1)^d.
std::vector<double> weight_polynomial(int d, Norm norm) {
  std::vector<double> w(d, 0.0);
  if (norm == Norm::euclidean) {
    w[d - 1] = 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
    return w;
  }
  // (2r+1)^d - (2r-1)^d keeps the terms where d - j is odd, doubled.
  for (int j = 0; j < d; ++j) {
    if ((d - j) % 2 == 0) continue;
    const double binom = std::tgamma(d + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(d - j + 1.0));
    w[j] = 2.0 * binom * std::ldexp(1.0, j);
  }
  return w;
}

double poly_eval(const std::vector<double>& w, double r) {
  double acc = 0;
  for (std::size_t j = w.size(); j-- > 0;) acc = acc * r + w[j];
  return acc;
}

double far_field(const std::vector<double>& w, const std::vector<double>& a, double s, double R) {
  // integral over [R, 2R] with the cutoff, Simpson
  const int m = 4000;
  const double h = R / m;
  double simpson = 0;
  for (int i = 0; i <= m; ++i) {
    const double r = R + i * h;
    const double x = std::pow(r, -s);
    double f = 0;
    double xk = 1;
    for (std::size_t k = 1; k < a.size(); ++k) {
      xk *= x;
      f += a[k] * xk;
      if (std::abs(xk) < 1e-300) break;
    }
    const double val = poly_eval(w, r) * f * (1.0 - smooth_step(r / R));
    const double c = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    simpson += c * val;
  }
  simpson *= h / 3.0;
  // integral over [2R, inf) termwise
  const double A = 2.0 * R;
  double tail = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0) continue;
    for (std::size_t k = 1; k < a.size(); ++k) {
      const double e = k * s - static_cast<double>(j) - 1.0;
      const double term = a[k] * std::pow(A, -e) / e;
      tail += w[j] * term;
      if (std::abs(term) < 1e-30 * (std::abs(tail) + 1e-300)) break;
    }
  }
  return simpson + tail;
}

double near_field(const LrpParams& params, SumKind kind, double R) {
  const int d = params.d;
  const std::int64_t reach = static_cast<std::int64_t>(std::ceil(2.0 * R));
  double acc = 0;
  if (params.norm == Norm::linf) {
    for (std::int64_t k = 1; k <= reach; ++k) {
      const double shell = std::pow(2.0 * k + 1.0, d) - std::pow(2.0 * k - 1.0, d);
      acc += shell * kind_value(long_range_probability(static_cast<double>(k), params.s), kind) *
             smooth_step(k / R);
    }
    return acc;
  }
  for_each_in_cube(d, reach, [&](const Point& v) {
    const double r = norm_of(v, d, Norm::euclidean);
    if (r == 0.0 || r >= 2.0 * R) return;
    acc += kind_value(long_range_probability(r, params.s), kind) * smooth_step(r / R);
  });
  return acc;
}

}  // namespace

LatticeSum lattice_sum(const LrpParams& params, SumKind kind, double tol) {
  require(params.d >= 1 && params.d <= kMaxDim, "lattice_sum: dimension must be in [1, 4]");
  require(params.s > params.d, "lattice_sum: series diverges unless s > d");
  require(tol > 0, "lattice_sum: tolerance must be positive");
  const int d = params.d;
  const double unit = 2.0 * d * kind_value(params.q, kind);
  if (!params.long_range_enabled) return {unit, 0.0, 1.0};

  const auto a = series_coefficients(kind);
  const auto w = weight_polynomial(d, params.norm);
  const double unit_lr = 2.0 * d * kind_value(long_range_probability(1.0, params.s), kind);
  auto at = [&](double R) { return near_field(params, kind, R) + far_field(w, a, params.s, R) - unit_lr; };

  const double cap = d == 1 ? 1 << 20 : (d == 2 ? 512.0 : (d == 3 ? 48.0 : 16.0));
  double R = 8.0;
  double prev = at(R);
  while (true) {
    const double R2 = 2.0 * R;
    const double cur = at(R2);
    const double err = std::abs(cur - prev);
    if (err <= tol * std::max(1.0, std::abs(cur)) || R2 >= cap) return {unit + cur, err, R2};
    R = R2;
    prev = cur;
  }
}

double expected_degree(const LrpParams& params, double tail_tol) {
  return lattice_sum(params, SumKind::probability, tail_tol).value;
}

}  // namespace lrp
