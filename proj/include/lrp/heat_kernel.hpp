#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "lrp/components.hpp"

namespace lrp {

enum class KernelMethod { exact, monte_carlo };

// Return probabilities p_{2t}(root, root) = P_root(X_{2t} = root) / deg(root), indexed by t.
// Vertices outside the safety box are absorbing; exit_mass[i] is the mass absorbed by time 2t.
struct HeatKernelSeries {
  Vertex root = 0;
  KernelMethod method = KernelMethod::exact;
  std::vector<std::int64_t> times;
  std::vector<double> values;
  std::vector<double> stderr_;
  std::vector<double> exit_mass;
};

struct KernelOptions {
  std::int64_t safety_radius = -1;  // -1: the whole box
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
};

// 1 inside the safety box, 0 outside.
std::vector<std::uint8_t> safety_mask(const BoxComponent& comp, std::int64_t safety_radius);

HeatKernelSeries heat_kernel_exact(const Graph& g, Vertex root, std::int64_t t_max,
                                   std::span<const std::uint8_t> inside = {});
HeatKernelSeries heat_kernel_exact(const BoxComponent& comp, std::int64_t root_box_index, std::int64_t t_max,
                                   const KernelOptions& options = {});

HeatKernelSeries heat_kernel_mc(const Graph& g, Vertex root, const std::vector<std::int64_t>& t_list,
                                std::int64_t walks, std::uint64_t seed, std::span<const std::uint8_t> inside = {},
                                int threads = 1);
HeatKernelSeries heat_kernel_mc(const BoxComponent& comp, std::int64_t root_box_index,
                                const std::vector<std::int64_t>& t_list, std::int64_t walks, std::uint64_t seed,
                                const KernelOptions& options = {}, int threads = 1);

// Law of X_steps started at root (sub-stochastic when some vertices absorb).
Eigen::VectorXd walk_distribution(const Graph& g, Vertex root, std::int64_t steps,
                                  std::span<const std::uint8_t> inside = {});

struct AnnealedOptions {
  KernelOptions kernel;
  SampleOptions sample;
  std::int64_t resample_cap = 100;
  int threads = 1;
};

// Mean of p_{2t}(0, 0) over independent environments, each conditioned on 0 lying in V_n.
struct AnnealedCurve {
  LrpParams params;
  std::vector<std::int64_t> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<double> exit_mass;  // largest over replicates
  std::int64_t replicates = 0;
  std::int64_t resamples = 0;
};

AnnealedCurve annealed_curve(const LrpParams& params, const std::vector<std::int64_t>& t_list,
                             std::int64_t replicates, std::uint64_t seed, const AnnealedOptions& options = {});

struct BiskupRow {
  std::int64_t t = 0;
  double radius = 0;       // graph-distance radius c t^{1/d_w}
  double p2t = 0;          // p_{2t}(root, root)
  double ball_mass = 0;    // P(d(root, X_t) <= radius)
  double ball_weight = 0;  // sum of degrees over the ball
  double cs_bound = 0;     // ball_mass^2 / ball_weight
  double scaled_bound = 0; // radius^{-d_f} ball_mass^2
  bool holds = false;
};

std::vector<BiskupRow> biskup_lower_bound_check(const Graph& g, Vertex root, const std::vector<std::int64_t>& t_list,
                                                double walk_dim, double frac_dim, double c_radius = 1.0);

// Smallest box radius the regime rule asks for: 4 t^{1/(s-d)} when s < d+2, else 8 sqrt(t).
std::int64_t recommended_box_radius(int d, double s, std::int64_t t_max);

}  // namespace lrp
