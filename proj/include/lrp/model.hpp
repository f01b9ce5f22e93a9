#pragma once

#include "lrp/lattice.hpp"
#include "lrp/params.hpp"

namespace lrp {

// 1 - exp(-r^{-s}).
inline double long_range_probability(double r, double s) { return -std::expm1(-std::pow(r, -s)); }

// Probability that x and x+v are joined. Needs s > 0 only; zero displacement is rejected.
double edge_probability(const LrpParams& params, const Point& v);

struct LatticeSum {
  double value = 0;
  double error = 0;  // |difference| between the last two cutoff radii
  double radius = 0;
};

enum class SumKind { probability, variance };

// sum over v != 0 of p(v) (probability) or p(v)(1 - p(v)) (variance). The far field is
// replaced by an integral after a smooth radial cutoff; the cutoff radius is doubled
// until two successive values agree to tol.
LatticeSum lattice_sum(const LrpParams& params, SumKind kind, double tol = 1e-12);

// Expected degree of a vertex of Z^d. Needs s > d.
double expected_degree(const LrpParams& params, double tail_tol = 1e-12);

}  // namespace lrp
