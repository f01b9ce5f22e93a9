#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lrp/lattice.hpp"
#include "lrp/params.hpp"

namespace lrp {

// phi(x) = 1 for |x-c| <= N-M, (N - |x-c|)/M for N-M < |x-c| <= N, 0 beyond.
struct CutoffSpec {
  int d = 1;
  double N = 8;
  double M = 4;
  Norm norm = Norm::euclidean;
  Point center{};

  double beta() const { return N / M; }
  double distance(const Point& x) const {
    Point v{};
    for (int i = 0; i < d; ++i) v[i] = x[i] - center[i];
    return norm_of(v, d, norm);
  }
  double operator()(const Point& x) const {
    const double r = distance(x);
    if (r <= N - M) return 1.0;
    if (r <= N) return (N - r) / M;
    return 0.0;
  }
  static CutoffSpec with_beta(int d, double N, double beta, Norm norm = Norm::euclidean) {
    return {d, N, N / beta, norm, Point{}};
  }
};

// Ordered-pair sums by region (inner I, ramp R, outer O); S1+S2+S3+S4 = 2 E.
struct EnergyBreakdown {
  double S1 = 0;  // I-O
  double S2 = 0;  // I-R
  double S3 = 0;  // O-R
  double S4 = 0;  // R-R
  double total() const { return S1 + S2 + S3 + S4; }
};

// E over the environment on Z^d of the Dirichlet energy of phi (one term per unordered pair).
double expected_cutoff_energy(const LrpParams& params, const CutoffSpec& phi, double tol = 1e-13);
EnergyBreakdown energy_breakdown(const LrpParams& params, const CutoffSpec& phi, double tol = 1e-13);

using LatticeFunction = std::vector<std::pair<Point, double>>;

// Cov(E(f_a), E(f_b)) = sum over unordered pairs of p(1-p) (df_a)^2 (df_b)^2.
double exact_energy_covariance(const LrpParams& params, const LatticeFunction& fa, const LatticeFunction& fb,
                               double tol = 1e-13);

// N^{4d} |f_a|^2 |f_b|^2 / ((sep - 2N)^{2s} + 1) with sup norms.
double covariance_lemma_form(int d, double s, double N, double fa_sup, double fb_sup, double separation);

}  // namespace lrp
