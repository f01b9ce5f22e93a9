#include <doctest.h>

#include <algorithm>
#include <queue>
#include <random>

#include "lrp/lrp.hpp"

using namespace lrp;

namespace {

Environment env_1d(std::int64_t n, const std::vector<Edge>& edges) {
  Environment env;
  env.params.d = 1;
  env.params.n = n;
  env.box = Box(1, n);
  env.graph = Graph::from_edges(static_cast<Vertex>(2 * n + 1), edges);
  return env;
}

// Labels by BFS, numbered in order of the smallest member.
std::vector<int> bfs_labels(const Graph& g) {
  std::vector<int> label(g.vertex_count(), -1);
  int next = 0;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (label[s] >= 0) continue;
    std::queue<Vertex> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop();
      for (Vertex v : g.neighbors(u))
        if (label[v] < 0) {
          label[v] = next;
          q.push(v);
        }
    }
    ++next;
  }
  return label;
}

Graph random_graph(std::mt19937_64& rng, int max_n, double density) {
  std::uniform_int_distribution<int> nv(1, max_n);
  const int n = nv(rng);
  std::bernoulli_distribution coin(density / n);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

// x is a cut-point when {x, x+1} is the only edge with u <= x < v.
std::vector<std::int64_t> brute_cut_points(const Environment& env) {
  std::vector<std::int64_t> out;
  const auto edges = env.graph.edges();
  for (Vertex x = 0; x + 1 < env.graph.vertex_count(); ++x) {
    int crossing = 0;
    bool unit = false;
    for (const auto& [u, v] : edges)
      if (u <= x && x < v) {
        ++crossing;
        unit = unit || (u == x && v == x + 1);
      }
    if (crossing == 1 && unit) out.push_back(x - env.params.n);
  }
  return out;
}

}  // namespace

TEST_SUITE("components") {

TEST_CASE("labels on lattice and empty graphs") {
  const auto lat = lattice_environment(2, 5);
  const auto a = label_components(lat.graph);
  CHECK(a.size.size() == 1);
  CHECK(a.size[0] == 121);
  LrpParams p;
  p.d = 2;
  p.s = 3;
  p.q = 0;
  p.n = 5;
  p.long_range_enabled = false;
  const auto empty = sample_environment(p);
  const auto b = label_components(empty.graph);
  CHECK(b.size.size() == 121);
  CHECK(b.largest == 0);
}

TEST_CASE("path with a far edge") {
  // path 0-1-2-3-4 plus the long edge 4-7; 5 and 6 are isolated
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 7}};
  const auto g = Graph::from_edges(8, edges);
  const auto l = label_components(g);
  CHECK(l.label == std::vector<std::int32_t>{0, 0, 0, 0, 0, 1, 2, 0});
  CHECK(l.size == std::vector<std::int64_t>{6, 1, 1});
  CHECK(l.largest == 0);
  const auto b = bfs_labels(g);
  CHECK(l.label == std::vector<std::int32_t>(b.begin(), b.end()));
}

TEST_CASE("ties pick the smaller id") {
  const std::vector<Edge> edges{{0, 1}, {2, 3}};
  const auto l = label_components(Graph::from_edges(4, edges));
  CHECK(l.largest == 0);
}

TEST_CASE("union-find agrees with BFS on random graphs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto g = random_graph(rng, 200, 1.2);
    const auto l = label_components(g);
    const auto b = bfs_labels(g);
    REQUIRE(l.label.size() == b.size());
    bool same = true;
    for (std::size_t v = 0; v < b.size(); ++v) same = same && l.label[v] == b[v];
    CHECK(same);
    std::int64_t total = 0;
    for (auto s : l.size) total += s;
    CHECK(total == g.vertex_count());
    CHECK(l.size[l.largest] == *std::max_element(l.size.begin(), l.size.end()));
  }
}

TEST_CASE("largest component structure") {
  const auto lat = largest_component(lattice_environment(1, 40));
  CHECK(lat.vertex_count() == 81);
  CHECK(lat.edge_count() == 80);
  CHECK(lat.margin == window_margin(40));
  CHECK(window_margin(40) == 20);  // ceil(log(81)^2) = ceil(19.31)

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    LrpParams p;
    p.d = 1 + static_cast<int>(seed % 2);
    p.s = p.d + 0.7;
    p.q = 0.4;
    p.n = p.d == 1 ? 200 : 20;
    p.seed = seed;
    const auto env = sample_environment(p);
    const auto c = largest_component(env);
    CHECK(c.edge_count() >= c.vertex_count() - 1);
    CHECK(label_components(c.graph).size.size() == 1);
    CHECK(std::is_sorted(c.vertices.begin(), c.vertices.end()));
    for (Vertex w : c.window) CHECK(env.box.linf(c.vertices[w]) <= p.n - c.margin);
    CHECK(static_cast<std::int64_t>(c.window.size()) <= c.window_box_size);
  }
}

TEST_CASE("largest cluster is macroscopic for d=1, s=1.5, q=0") {
  LrpParams p;
  p.d = 1;
  p.s = 1.5;
  p.q = 0;
  p.n = 512;
  int good = 0;
  for (int r = 0; r < 100; ++r) {
    p.seed = 100 + r;
    const auto c = largest_component(sample_environment(p));
    good += c.vertex_count() >= 0.1 * (2 * p.n + 1);
  }
  // frozen: 100/100 with these seeds
  CHECK(good >= 95);
}

TEST_CASE("condition V") {
  LrpParams lat;
  lat.d = 2;
  lat.s = 3;
  lat.q = 1;
  lat.seed = 3;
  for (const auto& row : check_condition_V(lat, {0.01, 0.25, 1.0}, {4, 8, 16}, 5)) CHECK(row.p_hat == 1.0);

  LrpParams p;
  p.d = 1;
  p.s = 1.5;
  p.q = 0;
  p.seed = 11;
  const auto rows = check_condition_V(p, {0.05}, {256, 512, 1024, 2048, 4096}, 200);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].p_hat >= rows[i - 1].p_hat - 0.02);
  CHECK(rows.back().p_hat >= 0.95);
  CHECK(rows.back().ci.lo <= rows.back().p_hat);
  CHECK(rows.back().ci.hi >= rows.back().p_hat);

  try {
    check_condition_V(p, {0.05}, {64}, 0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("window diagnostics") {
  LrpParams lat;
  lat.d = 1;
  lat.s = 2;
  lat.q = 1;
  for (const auto& row : bs_diagnostics(lat, {64, 128}, 4)) {
    CHECK(row.a_proxy == 0.0);
  }
  LrpParams p;
  p.d = 1;
  p.s = 1.5;
  p.q = 0;
  p.seed = 11;
  const auto rows = bs_diagnostics(p, {256, 512, 1024, 2048}, 200);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].var_wn_over_n2d < rows[i - 1].var_wn_over_n2d);
  CHECK(rows.back().a_proxy <= rows.front().a_proxy);
}

TEST_CASE("cut-point examples") {
  // {0..3} placed at box indices 0..3 of a radius-2 box; index 4 is isolated
  const auto env = env_1d(2, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
  CHECK(find_cut_points(env) == std::vector<std::int64_t>{0});  // box index 2

  const auto lat = lattice_environment(1, 6);
  const auto all = find_cut_points(lat);
  CHECK(all.size() == 12);
  CHECK(all.front() == -6);
  CHECK(all.back() == 5);

  std::vector<Edge> edges;
  for (Vertex i = 0; i < 12; ++i) edges.push_back({i, i + 1});
  edges.push_back({6, 9});  // the long edge {0, 3} in coordinates
  const auto cut = find_cut_points(env_1d(6, edges));
  for (std::int64_t x : {0, 1, 2}) CHECK(std::find(cut.begin(), cut.end(), x) == cut.end());
  CHECK(cut == brute_cut_points(env_1d(6, edges)));
  CHECK(cut.size() == 9);
}

TEST_CASE("cut-point sweep agrees with brute force") {
  for (int r = 0; r < 500; ++r) {
    LrpParams p;
    p.d = 1;
    p.s = 1.2 + 0.004 * r;
    p.q = 0.5 + 0.001 * r;
    p.n = 1 + r % 64;
    p.seed = 900 + r;
    const auto env = sample_environment(p);
    CHECK(find_cut_points(env) == brute_cut_points(env));
  }
}

TEST_CASE("cut-points need d = 1") {
  try {
    find_cut_points(lattice_environment(2, 3));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported);
  }
}

}
