#include <doctest.h>

#include <algorithm>
#include <random>

#include "lrp/lrp.hpp"

using namespace lrp;

namespace {

Graph random_connected_graph(std::mt19937_64& rng, int n, double extra) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({std::uniform_int_distribution<int>(0, v - 1)(rng), v});
  std::bernoulli_distribution coin(extra / n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) && std::find(edges.begin(), edges.end(), Edge{u, v}) == edges.end() &&
          std::find(edges.begin(), edges.end(), Edge{v, u}) == edges.end())
        edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

// Largest degree sum over subsets of exactly k vertices, by enumeration.
double brute_pi_star(const Graph& g, double eps) {
  const int n = g.vertex_count();
  const int k = std::min(n, static_cast<int>(std::floor(eps * n + 1e-12)));
  std::vector<char> pick(n, 0);
  std::fill(pick.begin(), pick.begin() + k, 1);
  std::sort(pick.begin(), pick.end());
  double best = 0;
  do {
    double s = 0;
    for (int v = 0; v < n; ++v)
      if (pick[v]) s += g.degree(v);
    best = std::max(best, s);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best / (2.0 * g.edge_count());
}

// p_{2t}(x, x) from the dense transition matrix power.
std::vector<double> dense_diagonal(const Graph& g, int t) {
  const int n = g.vertex_count();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u)) P(u, v) = 1.0 / g.degree(u);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < 2 * t; ++i) Q = Q * P;
  std::vector<double> out(n);
  for (int x = 0; x < n; ++x) out[x] = Q(x, x) / g.degree(x);
  return out;
}

BoxComponent component(int d, double s, double q, std::int64_t n, std::uint64_t seed) {
  LrpParams p;
  p.d = d;
  p.s = s;
  p.q = q;
  p.n = n;
  p.seed = seed;
  return largest_component(sample_environment(p));
}

}  // namespace

TEST_SUITE("capacitors-verify") {

TEST_CASE("pi star examples") {
  const std::vector<Edge> e{{0, 1}, {0, 2}, {0, 3}, {1, 2}};
  const auto g = Graph::from_edges(4, e);
  CHECK(pi_star(g, 0.25) == 3.0 / 8.0);
  CHECK(pi_star(g, 1.0) == 1.0);
  CHECK(pi_star(g, 5.0) == 1.0);
  std::vector<Edge> cyc;
  for (int i = 0; i < 10; ++i) cyc.push_back({i, (i + 1) % 10});
  CHECK(pi_star(Graph::from_edges(10, cyc), 0.3) == doctest::Approx(0.3));
}

TEST_CASE("pi star greedy equals brute force") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> eps(0.05, 0.6);
  for (int i = 0; i < 500; ++i) {
    const auto g = random_connected_graph(rng, 2 + i % 19, 2.5);
    const double e = eps(rng);
    CHECK(pi_star(g, e) == doctest::Approx(brute_pi_star(g, e)).epsilon(1e-14));
  }
}

TEST_CASE("regimes and scales") {
  CHECK(regime_of(1, 1.7) == Regime::stable);
  CHECK(regime_of(2, 5) == Regime::gaussian);
  CHECK(regime_of(2, 4) == Regime::critical);
  const auto r = RegimeParams::for_model(1, 1.7, 3.0);
  const double t = 256;
  CHECK(r.box_scale(t) == doctest::Approx(std::pow(t, 1 / 0.7) * std::pow(std::log(t), 6 / 0.7)));
  CHECK(r.gamma() == doctest::Approx(1 / 0.7));
  const auto g = RegimeParams::for_model(2, 5, 1.0);
  CHECK(g.box_scale(t) == doctest::Approx(16 * std::log(t)));
  CHECK(g.gamma() == 1.0);
  const auto c = RegimeParams::for_model(2, 4, 1.0);
  CHECK(c.box_scale(t) == doctest::Approx(16 * std::pow(std::log(t), 1.5)));
  CHECK(r.beta(3.0) == 2.0);
  CHECK_THROWS_AS(RegimeParams::for_model(2, 4, 1.0, LambdaMode::constant), Error);
}

TEST_CASE("decomposition structure") {
  const auto comp = component(1, 1.7, 1, 400, 3);
  try {
    build_decomposition(comp, 256, RegimeParams::for_model(1, 1.7, 3.0));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
    CHECK(std::string(e.what()).find("needs n") != std::string::npos);
  }
  for (const auto& [d, s, q, n, t] : std::vector<std::tuple<int, double, double, std::int64_t, double>>{
           {1, 1.7, 1.0, 2000, 16}, {1, 1.7, 0.3, 2000, 16}, {2, 5, 1.0, 60, 9}, {2, 3, 0.5, 60, 4}}) {
    const auto c = component(d, s, q, n, 7);
    const auto regime = RegimeParams::for_model(d, s, 0.5, LambdaMode::constant, 1.5);
    const auto dec = build_decomposition(c, t, regime);
    REQUIRE(!dec.capacitors.empty());
    std::vector<char> used(c.vertex_count(), 0);
    const double side = std::pow(2.0 * dec.N + 1, d);
    for (const auto& cap : dec.capacitors) {
      CHECK(static_cast<double>(cap.Omega.size()) <= side);
      CHECK(std::includes(cap.Omega.begin(), cap.Omega.end(), cap.A.begin(), cap.A.end()));
      for (Vertex v : cap.Omega) {
        CHECK(!used[v]);
        used[v] = 1;
        CHECK(linf_of(c.position(v), d) <= n - dec.N);
      }
    }
  }
}

TEST_CASE("A3 report on the full lattice") {
  const auto comp = component(1, 1.7, 1, 3000, 5);
  const auto regime = RegimeParams::for_model(1, 1.7, 0.5, LambdaMode::constant, 1.5);
  const auto dec = build_decomposition(comp, 16, regime);
  const auto rep = evaluate_A3(comp, dec, regime);
  CHECK(rep.infimum_ok);
  CHECK(rep.cap_sum >= 0);
  CHECK(rep.cap_sum <= rep.test_energy_sum);
  CHECK(rep.pi_sum >= 0);
  CHECK(rep.pi_sum <= 1);
  std::vector<char> in_a(comp.vertex_count(), 0);
  for (const auto& cap : dec.capacitors)
    for (Vertex a : cap.A) in_a[a] = 1;
  double rest = 0;
  for (Vertex v = 0; v < comp.vertex_count(); ++v)
    if (!in_a[v]) rest += comp.graph.degree(v) / (2.0 * comp.edge_count());
  CHECK(rep.pi_sum + rest == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.k == static_cast<std::int64_t>(dec.capacitors.size()));
}

TEST_CASE("A3 capacity ratio plateaus in t") {
  // the tiling covers [-n+N, n-N], so n must be large against N(256) = 8779
  const auto comp = component(1, 1.7, 1, 200000, 21);
  const auto regime = RegimeParams::for_model(1, 1.7, 0.5, LambdaMode::constant, 1.5);
  std::vector<double> ratio;
  for (double t : {64.0, 128.0, 256.0}) {
    const auto rep = evaluate_A3(comp, build_decomposition(comp, t, regime), regime);
    CHECK(rep.infimum_ok);
    ratio.push_back(rep.cap_sum * t / comp.edge_count());
  }
  CHECK(plateau(ratio));
  CHECK(*std::max_element(ratio.begin(), ratio.end()) <= 1.5 * *std::min_element(ratio.begin(), ratio.end()));
}

TEST_CASE("diagonal return probabilities") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const auto g = random_connected_graph(rng, 6 + 3 * i, 2.0);
    for (int t : {1, 3, 10}) {
      const auto fast = diagonal_return_probabilities(g, t);
      const auto slow = dense_diagonal(g, t);
      for (std::size_t x = 0; x < fast.size(); ++x) CHECK(std::abs(fast[x] - slow[x]) <= 1e-12);
    }
  }
}

TEST_CASE("kpr inequality on the 10-vertex path") {
  std::vector<Edge> e;
  for (int i = 0; i < 9; ++i) e.push_back({i, i + 1});
  const auto g = Graph::from_edges(10, e);
  const auto r = check_kpr_inequality(g, {{{4}, {3, 4, 5}}}, 2, 0.2);
  CHECK(r.M == 3);
  CHECK(r.cap_sum == doctest::Approx(2.0));
  CHECK(r.pi_star == doctest::Approx(4.0 / 18.0));
  CHECK(r.pi_A_sum == doctest::Approx(2.0 / 18.0));
  CHECK(r.rhs == doctest::Approx(-7.0 / 9.0));
  CHECK(r.threshold == doctest::Approx(0.2 * 10 / (8.0 * 3 * 9)));
  // every vertex returns with p_4(x,x) >= 3/8 / deg >= threshold
  const auto p = dense_diagonal(g, 2);
  double lhs = 0;
  for (int x = 0; x < 10; ++x)
    if (p[x] >= r.threshold) lhs += g.degree(x) / 18.0;
  CHECK(r.lhs == doctest::Approx(lhs));
  CHECK(r.holds);
}

TEST_CASE("kpr inequality on random instances") {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 30; ++i) {
    const auto g = random_connected_graph(rng, 20 + 7 * i, 1.5);
    std::vector<Vertex> order(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Capacitor> caps;
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
      Capacitor c;
      for (int j = 0; j < 5 && pos < order.size(); ++j) c.Omega.push_back(order[pos++]);
      c.A.assign(c.Omega.begin(), c.Omega.begin() + 2);
      std::sort(c.Omega.begin(), c.Omega.end());
      std::sort(c.A.begin(), c.A.end());
      caps.push_back(c);
    }
    for (double eps : {0.01, 0.1, 0.5}) CHECK(check_kpr_inequality(g, caps, 1 + i, eps).holds);
  }
}

TEST_CASE("kpr input errors") {
  const std::vector<Edge> e{{0, 1}, {2, 3}};
  try {
    check_kpr_inequality(Graph::from_edges(4, e), {{{0}, {0}}}, 1, 0.1);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::disconnected);
  }
  const std::vector<Edge> p{{0, 1}, {1, 2}, {2, 3}};
  try {
    check_kpr_inequality(Graph::from_edges(4, p), {{{0}, {0, 1}}, {{2}, {1, 2}}}, 1, 0.1);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("plateau rule") {
  CHECK(plateau({1, 1.1, 1.2, 1.3}));
  CHECK_FALSE(plateau({1, 1, 1, 2}));
  CHECK(plateau({2, 1, 1, 1}));
}

TEST_CASE("A1 and A2") {
  LrpParams path;
  path.d = 1;
  path.s = 2;
  path.q = 1;
  path.long_range_enabled = false;
  const auto lat = check_A1_A2(path, {64, 256}, 30);
  CHECK(lat.rows[0].edge_ratio_sq == doctest::Approx(std::pow(128.0 / 129.0, 2)));
  CHECK(lat.rows[1].edge_ratio_sq == doctest::Approx(std::pow(512.0 / 513.0, 2)));
  CHECK(lat.edge_ratio_plateau);

  LrpParams p;
  p.d = 1;
  p.s = 1.5;
  p.q = 1;
  p.seed = 12;
  const auto rep = check_A1_A2(p, {256, 512, 1024, 2048}, 60);
  CHECK(rep.edge_ratio_plateau);
  CHECK(rep.pistar_bounded);
  try {
    check_A1_A2(p, {256}, 29);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::precondition);
  }
}

}
