#include "lrp/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lrp/error.hpp"
#include "lrp/parallel.hpp"
#include "lrp/rng.hpp"

namespace lrp {

std::vector<std::uint8_t> safety_mask(const BoxComponent& comp, std::int64_t safety_radius) {
  std::vector<std::uint8_t> inside(comp.vertex_count(), 1);
  if (safety_radius < 0 || safety_radius >= comp.box.radius()) return inside;
  for (Vertex v = 0; v < comp.vertex_count(); ++v)
    inside[v] = comp.box.linf(comp.vertices[v]) <= safety_radius ? 1 : 0;
  return inside;
}

namespace {

Vertex root_of(const BoxComponent& comp, std::int64_t root_box_index) {
  require(root_box_index >= 0 && root_box_index < comp.box.size(), "root outside the box");
  const Vertex r = comp.local(root_box_index);
  if (r < 0) fail(ErrorKind::precondition, "root is not in the largest cluster");
  return r;
}

void check_root(const Graph& g, Vertex root, std::span<const std::uint8_t> inside) {
  require(root >= 0 && root < g.vertex_count(), "root out of range");
  if (g.degree(root) == 0) fail(ErrorKind::precondition, "root is isolated");
  require(inside.empty() || inside.size() == static_cast<std::size_t>(g.vertex_count()), "mask size mismatch");
  if (!inside.empty() && !inside[root]) fail(ErrorKind::precondition, "root lies outside the safety box");
}

// One step of the walk, then absorb the mass outside the safety box.
class Evolver {
 public:
  Evolver(const Graph& g, std::span<const std::uint8_t> inside) : w_(g.adjacency<double>()) {
    // w_(v, u) = 1 / deg(u), so one step is mu <- w_ mu
    for (Eigen::Index k = 0; k < w_.nonZeros(); ++k) w_.valuePtr()[k] = 1.0 / g.degree(w_.innerIndexPtr()[k]);
    if (!inside.empty() && std::find(inside.begin(), inside.end(), 0) != inside.end()) {
      mask_.resize(g.vertex_count());
      for (Eigen::Index i = 0; i < mask_.size(); ++i) mask_[i] = inside[i] ? 1.0 : 0.0;
    }
    tmp_.resize(g.vertex_count());
  }

  // Returns the mass absorbed during this step.
  double step(Eigen::VectorXd& mu) {
    tmp_.noalias() = w_ * mu;
    mu.swap(tmp_);
    if (mask_.size() == 0) return 0.0;
    const double before = mu.sum();
    mu = mu.cwiseProduct(mask_);
    return before - mu.sum();
  }

 private:
  Eigen::SparseMatrix<double, Eigen::RowMajor, std::int32_t> w_;
  Eigen::VectorXd mask_, tmp_;
};

}  // namespace

HeatKernelSeries heat_kernel_exact(const Graph& g, Vertex root, std::int64_t t_max,
                                   std::span<const std::uint8_t> inside) {
  check_root(g, root, inside);
  require(t_max >= 1, "t_max must be >= 1");
  Evolver walk(g, inside);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(g.vertex_count());
  mu[root] = 1.0;
  const double deg = g.degree(root);
  HeatKernelSeries out;
  out.root = root;
  out.method = KernelMethod::exact;
  double absorbed = 0;
  for (std::int64_t step = 1; step <= 2 * t_max; ++step) {
    absorbed += walk.step(mu);
    if (step % 2 == 0) {
      out.times.push_back(step / 2);
      out.values.push_back(mu[root] / deg);
      out.stderr_.push_back(0.0);
      out.exit_mass.push_back(absorbed);
    }
  }
  return out;
}

HeatKernelSeries heat_kernel_exact(const BoxComponent& comp, std::int64_t root_box_index, std::int64_t t_max,
                                   const KernelOptions& options) {
  const Vertex root = root_of(comp, root_box_index);
  const double bytes = static_cast<double>(comp.vertex_count()) * 40.0 + static_cast<double>(comp.edge_count()) * 24.0;
  if (bytes > static_cast<double>(options.memory_budget_bytes))
    fail(ErrorKind::resource, "heat kernel iteration exceeds the memory budget");
  const auto inside = safety_mask(comp, options.safety_radius);
  return heat_kernel_exact(comp.graph, root, t_max, inside);
}

Eigen::VectorXd walk_distribution(const Graph& g, Vertex root, std::int64_t steps,
                                  std::span<const std::uint8_t> inside) {
  check_root(g, root, inside);
  Evolver walk(g, inside);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(g.vertex_count());
  mu[root] = 1.0;
  for (std::int64_t k = 0; k < steps; ++k) walk.step(mu);
  return mu;
}

HeatKernelSeries heat_kernel_mc(const Graph& g, Vertex root, const std::vector<std::int64_t>& t_list,
                                std::int64_t walks, std::uint64_t seed, std::span<const std::uint8_t> inside,
                                int threads) {
  require_pre(walks > 0, "walks must be positive");
  require(!t_list.empty(), "empty time list");
  check_root(g, root, inside);
  std::vector<std::int64_t> times(t_list);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  require(times.front() >= 1, "times must be >= 1");
  const std::int64_t steps = 2 * times.back();
  const std::size_t k = times.size();

  const std::int64_t blocks = std::min<std::int64_t>(walks, 64);
  std::vector<std::vector<std::int64_t>> returns(blocks, std::vector<std::int64_t>(k, 0));
  std::vector<std::vector<std::int64_t>> exits(blocks, std::vector<std::int64_t>(k, 0));
  parallel_for(blocks, threads, [&](std::int64_t b) {
    const std::int64_t begin = walks * b / blocks, end = walks * (b + 1) / blocks;
    for (std::int64_t w = begin; w < end; ++w) {
      StreamRng rng(seed, Stream::walker, static_cast<std::uint64_t>(w));
      Vertex x = root;
      std::size_t next = 0;
      for (std::int64_t step = 1; step <= steps; ++step) {
        const auto nb = g.neighbors(x);
        std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
        x = nb[pick(rng)];
        if (!inside.empty() && !inside[x]) {
          for (std::size_t i = next; i < k; ++i)
            if (2 * times[i] >= step) ++exits[b][i];
          break;
        }
        if (next < k && step == 2 * times[next]) {
          if (x == root) ++returns[b][next];
          ++next;
        }
      }
    }
  });
  HeatKernelSeries out;
  out.root = root;
  out.method = KernelMethod::monte_carlo;
  const double deg = g.degree(root);
  const double nw = static_cast<double>(walks);
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t r = 0, e = 0;
    for (std::int64_t b = 0; b < blocks; ++b) {
      r += returns[b][i];
      e += exits[b][i];
    }
    const double p = static_cast<double>(r) / nw;
    out.times.push_back(times[i]);
    out.values.push_back(p / deg);
    out.stderr_.push_back(std::sqrt(p * (1 - p) / nw) / deg);
    out.exit_mass.push_back(static_cast<double>(e) / nw);
  }
  return out;
}

HeatKernelSeries heat_kernel_mc(const BoxComponent& comp, std::int64_t root_box_index,
                                const std::vector<std::int64_t>& t_list, std::int64_t walks, std::uint64_t seed,
                                const KernelOptions& options, int threads) {
  const Vertex root = root_of(comp, root_box_index);
  const auto inside = safety_mask(comp, options.safety_radius);
  return heat_kernel_mc(comp.graph, root, t_list, walks, seed, inside, threads);
}

AnnealedCurve annealed_curve(const LrpParams& params, const std::vector<std::int64_t>& t_list,
                             std::int64_t replicates, std::uint64_t seed, const AnnealedOptions& options) {
  params.validate();
  require_pre(replicates > 0, "replicates must be positive");
  require(!t_list.empty(), "empty time list");
  std::vector<std::int64_t> times(t_list);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  require(times.front() >= 1, "times must be >= 1");

  std::vector<std::vector<double>> values(replicates), exits(replicates);
  std::vector<std::int64_t> attempts(replicates, 0);
  parallel_for(replicates, options.threads, [&](std::int64_t r) {
    for (std::int64_t a = 0; a < options.resample_cap; ++a) {
      LrpParams p = params;
      p.seed = derive_seed(seed, Stream::replicate, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(a));
      const auto env = sample_environment(p, options.sample);
      const auto comp = largest_component(env);
      attempts[r] = a + 1;
      if (comp.local(env.box.origin()) < 0) continue;
      const auto series = heat_kernel_exact(comp, env.box.origin(), times.back(), options.kernel);
      for (auto t : times) {
        values[r].push_back(series.values[t - 1]);
        exits[r].push_back(series.exit_mass[t - 1]);
      }
      return;
    }
    fail(ErrorKind::precondition, "origin not in the largest cluster after resample cap");
  });
  AnnealedCurve out;
  out.params = params;
  out.times = times;
  out.replicates = replicates;
  for (auto a : attempts) out.resamples += a - 1;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> col(replicates);
    double worst = 0;
    for (std::int64_t r = 0; r < replicates; ++r) {
      col[r] = values[r][i];
      worst = std::max(worst, exits[r][i]);
    }
    const auto m = mean_stat(col);
    out.mean.push_back(m.mean);
    out.stderr_.push_back(m.stderr_);
    out.exit_mass.push_back(worst);
  }
  return out;
}

std::vector<BiskupRow> biskup_lower_bound_check(const Graph& g, Vertex root, const std::vector<std::int64_t>& t_list,
                                                double walk_dim, double frac_dim, double c_radius) {
  check_root(g, root, {});
  require(walk_dim > 0 && frac_dim > 0 && c_radius > 0, "dimensions and radius constant must be positive");
  std::vector<std::int64_t> times(t_list);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  require(!times.empty() && times.front() >= 1, "times must be >= 1");
  const auto dist = bfs_distances(g, root);
  Evolver walk(g, {});
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(g.vertex_count());
  mu[root] = 1.0;
  std::vector<BiskupRow> rows(times.size());
  std::size_t next_half = 0, next_full = 0;
  for (std::int64_t step = 1; step <= 2 * times.back(); ++step) {
    walk.step(mu);
    while (next_half < times.size() && times[next_half] == step) {
      auto& row = rows[next_half++];
      row.t = step;
      row.radius = c_radius * std::pow(static_cast<double>(step), 1.0 / walk_dim);
      for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (dist[v] >= 0 && dist[v] <= row.radius) {
          row.ball_mass += mu[v];
          row.ball_weight += g.degree(v);
        }
      row.cs_bound = row.ball_mass * row.ball_mass / row.ball_weight;
      row.scaled_bound = std::pow(row.radius, -frac_dim) * row.ball_mass * row.ball_mass;
    }
    while (next_full < times.size() && 2 * times[next_full] == step) {
      auto& row = rows[next_full++];
      row.p2t = mu[root] / g.degree(root);
      row.holds = row.p2t >= row.cs_bound * (1.0 - 1e-12);
    }
  }
  return rows;
}

std::int64_t recommended_box_radius(int d, double s, std::int64_t t_max) {
  const double t = static_cast<double>(t_max);
  if (s < d + 2) {
    const double r = std::ceil(4.0 * std::pow(t, 1.0 / (s - d)));
    return r < 9.0e18 ? static_cast<std::int64_t>(r) : std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(std::ceil(8.0 * std::sqrt(t)));
}

}  // namespace lrp
