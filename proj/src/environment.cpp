#include "lrp/environment.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "lrp/error.hpp"
#include "lrp/model.hpp"
#include "lrp/parallel.hpp"
#include "lrp/rng.hpp"

namespace lrp {

bool is_canonical(const Point& v, int d) {
  for (int i = 0; i < d; ++i) {
    if (v[i] > 0) return true;
    if (v[i] < 0) return false;
  }
  return false;
}

std::int64_t pair_count(const Point& v, int d, std::int64_t n) {
  std::int64_t c = 1;
  for (int i = 0; i < d; ++i) {
    const std::int64_t w = 2 * n + 1 - std::llabs(v[i]);
    if (w <= 0) return 0;
    c *= w;
  }
  return c;
}

namespace {

// K distinct values of [0, total), sorted.
std::vector<std::int64_t> choose_distinct(std::int64_t total, std::int64_t k, StreamRng& rng) {
  std::vector<std::int64_t> out;
  if (k <= 0) return out;
  if (k == total) {
    out.resize(total);
    for (std::int64_t i = 0; i < total; ++i) out[i] = i;
    return out;
  }
  const bool complement = k > total / 2;
  const std::int64_t want = complement ? total - k : k;
  std::uniform_int_distribution<std::int64_t> pick(0, total - 1);
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(want) * 2);
  std::vector<std::int64_t> order;
  order.reserve(want);
  while (static_cast<std::int64_t>(order.size()) < want) {
    const std::int64_t j = pick(rng);
    if (chosen.insert(j).second) order.push_back(j);
  }
  std::sort(order.begin(), order.end());
  if (!complement) return order;
  out.reserve(k);
  std::size_t pos = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    if (pos < order.size() && order[pos] == i) {
      ++pos;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

void sample_class(const LrpParams& params, const Box& box, const Point& v, std::uint64_t class_id,
                  std::vector<Edge>& out) {
  const int d = params.d;
  const std::int64_t n = params.n;
  const std::int64_t total = pair_count(v, d, n);
  if (total == 0) return;
  const double p = edge_probability(params, v);
  if (p <= 0.0) return;
  StreamRng rng(params.seed, Stream::edge_class, class_id);
  std::int64_t k = total;
  if (p < 1.0) {
    std::binomial_distribution<std::int64_t> binom(total, p);
    k = binom(rng);
  }
  if (k == 0) return;
  std::array<std::int64_t, kMaxDim> lo{}, width{};
  for (int i = 0; i < d; ++i) {
    lo[i] = -n + std::max<std::int64_t>(0, -v[i]);
    width[i] = 2 * n + 1 - std::llabs(v[i]);
  }
  for (std::int64_t j : choose_distinct(total, k, rng)) {
    Point x{}, y{};
    std::int64_t r = j;
    for (int i = 0; i < d; ++i) {
      x[i] = lo[i] + r % width[i];
      r /= width[i];
      y[i] = x[i] + v[i];
    }
    out.emplace_back(static_cast<Vertex>(box.index(x)), static_cast<Vertex>(box.index(y)));
  }
}

}  // namespace

std::size_t estimated_sample_bytes(const LrpParams& params) {
  const Box box(params.d, params.n);
  const double deg = params.long_range_enabled ? expected_degree(params, 1e-6) : 2.0 * params.d * params.q;
  const double edges = 0.5 * deg * static_cast<double>(box.size());
  // edge list during sampling plus both adjacency directions plus offsets
  return static_cast<std::size_t>(edges * 1.1 * (sizeof(Edge) + 2 * sizeof(Vertex)) +
                                  static_cast<double>(box.size()) * sizeof(std::int32_t));
}

Environment sample_environment(const LrpParams& params, const SampleOptions& options) {
  params.validate();
  const Box box(params.d, params.n);
  if (box.size() >= (std::int64_t{1} << 31)) fail(ErrorKind::resource, "box exceeds 2^31 vertices");
  const std::size_t need = estimated_sample_bytes(params);
  if (need > options.memory_budget_bytes)
    fail(ErrorKind::resource, "sampling needs about " + std::to_string(need >> 20) +
                                  " MiB, budget is " + std::to_string(options.memory_budget_bytes >> 20) +
                                  " MiB");

  const int d = params.d;
  const std::int64_t reach = params.long_range_enabled ? 2 * params.n : 1;
  const Box cube(d, reach);
  // Classes are keyed by their index in the displacement cube; blocks of that index
  // range are sampled independently and concatenated in order.
  const std::int64_t blocks = std::min<std::int64_t>(cube.size(), 256);
  std::vector<std::vector<Edge>> parts(blocks);
  std::vector<std::uint64_t> counts(blocks, 0);
  parallel_for(blocks, options.threads, [&](std::int64_t b) {
    const std::int64_t begin = cube.size() * b / blocks;
    const std::int64_t end = cube.size() * (b + 1) / blocks;
    for (std::int64_t id = begin; id < end; ++id) {
      const Point v = cube.point(id);
      if (!is_canonical(v, d)) continue;
      if (!params.long_range_enabled && !is_unit(v, d)) continue;
      ++counts[b];
      sample_class(params, box, v, static_cast<std::uint64_t>(id), parts[b]);
    }
  });
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<Edge> edges;
  edges.reserve(total);
  Environment env;
  for (std::int64_t b = 0; b < blocks; ++b) {
    edges.insert(edges.end(), parts[b].begin(), parts[b].end());
    std::vector<Edge>().swap(parts[b]);
    env.class_count += counts[b];
  }
  env.params = params;
  env.box = box;
  env.graph = Graph::from_edges(static_cast<Vertex>(box.size()), edges);
  return env;
}

Environment lattice_environment(int d, std::int64_t n) {
  LrpParams p;
  p.d = d;
  p.s = d + 1.0;
  p.q = 1.0;
  p.n = n;
  p.long_range_enabled = false;
  return sample_environment(p);
}

}  // namespace lrp
