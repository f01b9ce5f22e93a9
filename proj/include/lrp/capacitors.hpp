#pragma once

#include <cstdint>
#include <vector>

#include "lrp/components.hpp"
#include "lrp/potential.hpp"

namespace lrp {

// pi*(eps) = max pi(W) over |W| <= eps |V|: the floor(eps |V|) largest degrees over 2|E|.
double pi_star(const Graph& g, double eps);

enum class Regime { stable, gaussian, critical };
enum class LambdaMode { log_t, constant };

Regime regime_of(int d, double s);
const char* to_string(Regime r);

struct RegimeParams {
  Regime regime = Regime::stable;
  int d = 1;
  double s = 1.5;
  double kappa = 1.0;
  LambdaMode mode = LambdaMode::log_t;
  double lambda0 = 8.0;
  double alpha = 1.0;

  static RegimeParams for_model(int d, double s, double kappa = 1.0, LambdaMode mode = LambdaMode::log_t,
                                double lambda0 = 8.0);

  double lambda(double t) const;
  double box_scale(double t) const;  // N before rounding
  double beta(double N) const;       // N / M, at least 2
  double gamma() const;
  double delta1() const;
  double delta2() const;
  double delta3() const;
};

struct CapacitorDecomposition {
  double t = 0;
  double lambda = 0;
  double N_real = 0;
  std::int64_t N = 0;
  double M = 0;
  double beta = 0;
  std::int64_t inner_radius = 0;
  std::vector<Point> centers;
  std::vector<Capacitor> capacitors;  // local ids of the component
  std::int64_t dropped_empty = 0;
};

// Disjoint l-infinity boxes of radius N tiling [-n+N, n-N]^d; Omega_i = box, A_i = inner box of
// radius floor(N - M), both intersected with V_n.
CapacitorDecomposition build_decomposition(const BoxComponent& comp, double t, const RegimeParams& regime);

struct A3Report {
  double t = 0, N = 0, M = 0;
  std::int64_t k = 0;
  std::int64_t max_omega = 0;
  double bound_a = 0, bound_b = 0, bound_c = 0;
  double pi_sum = 0;
  double cap_sum = 0;
  double test_energy_sum = 0;  // sum of 2 E(phi_i) on G_n, an upper bound for cap_sum
  double ratio_a = 0, ratio_b = 0, ratio_c = 0;
  bool pass_a = false, pass_b = false, pass_c = false;
  bool infimum_ok = false;
  bool pass() const { return pass_a && pass_b && pass_c; }
};

A3Report evaluate_A3(const BoxComponent& comp, const CapacitorDecomposition& dec, const RegimeParams& regime,
                     const SolverOptions& options = {});

// p_{2t}(x, x) for every vertex.
std::vector<double> diagonal_return_probabilities(const Graph& g, std::int64_t t);

struct KprResult {
  double lhs = 0;
  double rhs = 0;
  double threshold = 0;
  double pi_star = 0;
  double pi_A_sum = 0;
  double cap_sum = 0;
  std::int64_t M = 0;
  bool holds = false;
};

// pi({x : p_{2t}(x,x) >= eps|V|/(8M|E|)}) >= -2 pi*(eps) + sum pi(A_i) - (t/|E|) sum cap(A_i).
KprResult check_kpr_inequality(const Graph& g, const std::vector<Capacitor>& caps, std::int64_t t, double eps,
                               const SolverOptions& options = {});

struct A1A2Row {
  std::int64_t n = 0;
  std::int64_t reps = 0;
  double edge_ratio_sq = 0;  // E[(|E_n| / |V_n|)^2]
  double edge_ratio_sq_se = 0;
  std::vector<double> eps;
  std::vector<double> pistar_sq_over_eps;  // E[pi*(eps)^2] / eps
};

struct A1A2Report {
  std::vector<A1A2Row> rows;
  bool edge_ratio_plateau = false;
  bool pistar_plateau = false;  // each eps column plateaus across n
  bool pistar_bounded = false;  // per n, no eps value exceeds 1.5 times the value at the largest eps
};

// A sequence plateaus when the largest value in its upper half is at most 1.5 times its median.
bool plateau(const std::vector<double>& values);

A1A2Report check_A1_A2(const LrpParams& params, const std::vector<std::int64_t>& n_list, std::int64_t reps,
                       const std::vector<double>& eps_list = {0.01, 0.02, 0.05}, int threads = 1);

}  // namespace lrp
