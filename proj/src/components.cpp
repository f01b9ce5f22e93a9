#include "lrp/components.hpp"

#include <cmath>
#include <numeric>

#include "lrp/error.hpp"
#include "lrp/parallel.hpp"
#include "lrp/rng.hpp"

namespace lrp {

ComponentLabels label_components(const Graph& g) {
  const Vertex n = g.vertex_count();
  std::vector<Vertex> parent(n);
  std::vector<std::int64_t> size(n, 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Vertex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u)) {
      if (v < u) continue;
      Vertex a = find(u), b = find(v);
      if (a == b) continue;
      if (size[a] < size[b]) std::swap(a, b);
      parent[b] = a;
      size[a] += size[b];
    }
  ComponentLabels out;
  out.label.assign(n, -1);
  std::vector<std::int32_t> id_of_root(n, -1);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex r = find(v);
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<std::int32_t>(out.size.size());
      out.size.push_back(0);
    }
    out.label[v] = id_of_root[r];
    ++out.size[id_of_root[r]];
  }
  for (std::size_t c = 0; c < out.size.size(); ++c)
    if (out.largest < 0 || out.size[c] > out.size[out.largest]) out.largest = static_cast<std::int32_t>(c);
  return out;
}

std::int64_t window_margin(std::int64_t n) {
  const double l = std::log(2.0 * static_cast<double>(n) + 1.0);
  return static_cast<std::int64_t>(std::ceil(l * l - 1e-12));
}

BoxComponent largest_component(const Environment& env) {
  const auto labels = label_components(env.graph);
  BoxComponent c;
  c.params = env.params;
  c.box = env.box;
  c.local_of.assign(env.graph.vertex_count(), -1);
  for (Vertex v = 0; v < env.graph.vertex_count(); ++v)
    if (labels.label[v] == labels.largest) {
      c.local_of[v] = static_cast<Vertex>(c.vertices.size());
      c.vertices.push_back(v);
    }
  c.graph = env.graph.induced(c.vertices);
  c.margin = window_margin(env.params.n);
  const std::int64_t half = env.params.n - c.margin;
  if (half >= 0) {
    c.window_box_size = 1;
    for (int i = 0; i < env.params.d; ++i) c.window_box_size *= 2 * half + 1;
    for (Vertex v = 0; v < c.vertex_count(); ++v)
      if (env.box.linf(c.vertices[v]) <= half) c.window.push_back(v);
  }
  return c;
}

namespace {

LrpParams replicate_params(const LrpParams& base, std::int64_t n, std::int64_t rep) {
  LrpParams p = base;
  p.n = n;
  p.seed = derive_seed(base.seed, Stream::replicate, static_cast<std::uint64_t>(n),
                       static_cast<std::uint64_t>(rep));
  return p;
}

}  // namespace

std::vector<ConditionVRow> check_condition_V(const LrpParams& params, const std::vector<double>& c_list,
                                             const std::vector<std::int64_t>& n_list, std::int64_t reps,
                                             int threads) {
  require_pre(reps > 0, "check_condition_V: reps must be positive");
  require(!c_list.empty() && !n_list.empty(), "check_condition_V: empty grid");
  std::vector<ConditionVRow> rows;
  for (std::int64_t n : n_list) {
    std::vector<std::int64_t> largest(reps);
    parallel_for(reps, threads, [&](std::int64_t r) {
      const auto env = sample_environment(replicate_params(params, n, r));
      const auto labels = label_components(env.graph);
      largest[r] = labels.size[labels.largest];
    });
    for (double c : c_list) {
      const double need = c * std::pow(static_cast<double>(n), params.d);
      std::int64_t hits = 0;
      for (auto sz : largest) hits += static_cast<double>(sz) >= need ? 1 : 0;
      rows.push_back({n, c, reps, static_cast<double>(hits) / static_cast<double>(reps),
                      wilson_interval(hits, reps)});
    }
  }
  return rows;
}

std::vector<BsRow> bs_diagnostics(const LrpParams& params, const std::vector<std::int64_t>& n_list,
                                  std::int64_t reps, int threads) {
  require_pre(reps >= 2, "bs_diagnostics: need at least two replicates");
  std::vector<BsRow> rows;
  for (std::int64_t n : n_list) {
    const std::int64_t margin = window_margin(n);
    const double giant = std::pow(std::log(static_cast<double>(n)), 2.0 * params.d);
    std::vector<double> wn(reps), frac(reps);
    parallel_for(reps, threads, [&](std::int64_t r) {
      const auto env = sample_environment(replicate_params(params, n, r));
      const auto labels = label_components(env.graph);
      std::vector<char> touches(labels.size.size(), 0);
      for (Vertex v = 0; v < env.graph.vertex_count(); ++v)
        if (env.box.linf(v) == n) touches[labels.label[v]] = 1;
      std::int64_t in_window = 0, stray = 0, window = 0;
      for (Vertex v = 0; v < env.graph.vertex_count(); ++v) {
        if (env.box.linf(v) > n - margin) continue;
        ++window;
        const auto c = labels.label[v];
        if (c == labels.largest) {
          ++in_window;
        } else if (touches[c] || static_cast<double>(labels.size[c]) >= giant) {
          ++stray;
        }
      }
      wn[r] = static_cast<double>(in_window);
      frac[r] = window > 0 ? static_cast<double>(stray) / static_cast<double>(window) : 0.0;
    });
    const auto w = mean_stat(wn);
    const auto f = mean_stat(frac);
    const double scale = std::pow(static_cast<double>(n), 2.0 * params.d);
    const double var = w.sd * w.sd / scale;
    const double var_se = var * std::sqrt(2.0 / static_cast<double>(reps - 1));
    BsRow row;
    row.n = n;
    row.margin = margin;
    row.reps = reps;
    row.var_wn_over_n2d = var;
    row.var_ci = {std::max(0.0, var - 1.96 * var_se), var + 1.96 * var_se};
    row.a_proxy = f.mean;
    row.a_ci = {std::max(0.0, f.mean - 1.96 * f.stderr_), f.mean + 1.96 * f.stderr_};
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::int64_t> find_cut_points(const Environment& env) {
  if (env.params.d != 1) fail(ErrorKind::unsupported, "cut-points are defined for d = 1 only");
  const Vertex m = env.graph.vertex_count();
  std::vector<std::int64_t> diff(m + 1, 0);
  for (Vertex u = 0; u < m; ++u)
    for (Vertex v : env.graph.neighbors(u))
      if (u < v) {
        ++diff[u];
        --diff[v];
      }
  std::vector<std::int64_t> out;
  std::int64_t crossing = 0;
  for (Vertex i = 0; i + 1 < m; ++i) {
    crossing += diff[i];
    if (crossing == 1 && env.graph.has_edge(i, i + 1)) out.push_back(i - env.params.n);
  }
  return out;
}

}  // namespace lrp
