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

// Random A within random Omega, both sorted.
Capacitor random_capacitor(std::mt19937_64& rng, Vertex n) {
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  std::shuffle(all.begin(), all.end(), rng);
  const int omega = std::uniform_int_distribution<int>(1, n)(rng);
  const int a = std::uniform_int_distribution<int>(1, omega)(rng);
  Capacitor c;
  c.Omega.assign(all.begin(), all.begin() + omega);
  c.A.assign(all.begin(), all.begin() + a);
  std::sort(c.Omega.begin(), c.Omega.end());
  std::sort(c.A.begin(), c.A.end());
  return c;
}

void check_solution(const Graph& g, const Capacitor& cap, const PotentialSolution& sol) {
  for (Eigen::Index i = 0; i < sol.values.size(); ++i) {
    CHECK(sol.values[i] >= -1e-12);
    CHECK(sol.values[i] <= 1 + 1e-12);
  }
  for (Vertex a : cap.A) CHECK(sol.at(a) == 1.0);
  CHECK(std::abs(sol.energy - sol.flux) <= 1e-8 * std::max(sol.energy, 1e-30));
  CHECK(sol.capacity == 2 * sol.energy);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(g.vertex_count());
  for (std::size_t i = 0; i < cap.Omega.size(); ++i) h[cap.Omega[i]] = sol.values[i];
  CHECK(dirichlet_energy<double>(g, h) == doctest::Approx(sol.energy).epsilon(1e-12));
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("dirichlet energy examples") {
  const auto lat = lattice_environment(1, 10);
  const auto& g = lat.graph;
  CHECK(dirichlet_energy<double>(g, Eigen::VectorXd::Constant(g.vertex_count(), 0.3)) == 0.0);
  Eigen::VectorXd ind = Eigen::VectorXd::Zero(g.vertex_count());
  ind[5] = 1;
  CHECK(dirichlet_energy<double>(g, ind) == 2.0);
  const auto l2 = lattice_environment(2, 3);
  Eigen::VectorXf ind2 = Eigen::VectorXf::Zero(l2.graph.vertex_count());
  ind2[l2.box.origin()] = 1;
  CHECK(dirichlet_energy<float>(l2.graph, ind2) == 4.0f);

  // phi_{4,2}: 1 on |x| <= 2, 1/2 at |x| = 3, 0 beyond; enumerate the edges directly
  const CutoffSpec phi{1, 4, 2, Norm::euclidean, Point{}};
  Eigen::VectorXd f(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) f[v] = phi(lat.box.point(v));
  double oracle = 0;
  for (std::int64_t x = -10; x < 10; ++x) {
    const double a = phi(Point{x, 0, 0, 0}), b = phi(Point{x + 1, 0, 0, 0});
    oracle += (a - b) * (a - b);
  }
  CHECK(oracle == 1.0);  // four edges of difference 1/2
  CHECK(dirichlet_energy<double>(g, f) == oracle);
}

TEST_CASE("capacitor closed forms") {
  const auto lat = lattice_environment(1, 5);
  const auto o = static_cast<Vertex>(lat.box.origin());
  const auto single = solve_capacitor(lat.graph, {{o}, {o}});
  CHECK(single.capacity == 4.0);
  const auto three = solve_capacitor(lat.graph, {{o}, {o - 1, o, o + 1}});
  CHECK(std::abs(three.capacity - 2.0) <= 1e-10);
  CHECK(std::abs(three.at(o - 1) - 0.5) <= 1e-10);
  CHECK(std::abs(three.at(o + 1) - 0.5) <= 1e-10);
  CHECK(three.at(o + 2) == 0.0);

  SolverOptions direct;
  direct.solver = LinearSolver::direct;
  CHECK(std::abs(solve_capacitor(lat.graph, {{o}, {o - 1, o, o + 1}}, direct).capacity - 2.0) <= 1e-12);

  try {
    solve_capacitor(lat.graph, {{o}, {o + 1}});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("solver reports non-convergence") {
  const auto lat = lattice_environment(2, 30);
  Capacitor cap;
  cap.A = {static_cast<Vertex>(lat.box.origin())};
  for (Vertex v = 0; v < lat.graph.vertex_count(); ++v) cap.Omega.push_back(v);
  SolverOptions opt;
  opt.max_iterations = 2;
  try {
    solve_capacitor(lat.graph, cap, opt);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::convergence);
  }
}

TEST_CASE("infimum, maximum principle and duality on random capacitors") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const auto g = random_connected_graph(rng, 10 + i, 2.5);
    const auto cap = random_capacitor(rng, g.vertex_count());
    const auto sol = solve_capacitor(g, cap);
    check_solution(g, cap, sol);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd psi = Eigen::VectorXd::Zero(g.vertex_count());
      for (Vertex v : cap.Omega) psi[v] = u(rng);
      for (Vertex a : cap.A) psi[a] = 1;
      CHECK(sol.capacity <= 2 * dirichlet_energy<double>(g, psi) + 1e-12);
    }
  }
}

TEST_CASE("domain monotonicity") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto g = random_connected_graph(rng, 12 + i % 25, 2.0);
    const auto small = random_capacitor(rng, g.vertex_count());
    Capacitor big = small;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (std::bernoulli_distribution(0.5)(rng)) big.Omega.push_back(v);
    std::sort(big.Omega.begin(), big.Omega.end());
    big.Omega.erase(std::unique(big.Omega.begin(), big.Omega.end()), big.Omega.end());
    CHECK(solve_capacitor(g, small).capacity >= solve_capacitor(g, big).capacity - 1e-9);
  }
}

TEST_CASE("effective resistance") {
  const auto lat = lattice_environment(1, 10);
  CHECK(std::abs(lattice_ball_resistance(1, 0, 10) - 5.0) <= 1e-10);
  const std::vector<Edge> one{{0, 1}};
  const auto g1 = Graph::from_edges(2, one);
  const std::vector<Vertex> a{0}, b{1};
  CHECK(effective_resistance(g1, a, b).value == doctest::Approx(1.0));

  const std::vector<Edge> split{{0, 1}, {2, 3}};
  const auto g2 = Graph::from_edges(4, split);
  const std::vector<Vertex> c{2};
  const auto r = effective_resistance(g2, a, c);
  CHECK_FALSE(r.connected);
  CHECK(std::isinf(r.value));

  // R(A, B) = 2 / cap_{V \ B}(A)
  std::mt19937_64 rng(77);
  for (int i = 0; i < 30; ++i) {
    const auto g = random_connected_graph(rng, 8 + i, 2.0);
    const std::vector<Vertex> A{0}, B{g.vertex_count() - 1};
    Capacitor cap;
    cap.A = A;
    for (Vertex v = 0; v + 1 < g.vertex_count(); ++v) cap.Omega.push_back(v);
    const double R = effective_resistance(g, A, B).value;
    CHECK(R == doctest::Approx(2.0 / solve_capacitor(g, cap).capacity).epsilon(1e-9));
  }
}

TEST_CASE("Rayleigh monotonicity") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const int n = 6 + i % 30;
    const auto g = random_connected_graph(rng, n, 1.0);
    auto edges = g.edges();
    std::uniform_int_distribution<int> pick(0, n - 1);
    Vertex u = 0, v = 0;
    do {
      u = pick(rng);
      v = pick(rng);
    } while (u == v || g.has_edge(u, v));
    edges.push_back({u, v});
    const auto h = Graph::from_edges(n, edges);
    const std::vector<Vertex> A{0}, B{static_cast<Vertex>(n - 1)};
    CHECK(effective_resistance(h, A, B).value <= effective_resistance(g, A, B).value * (1 + 1e-10));
  }
}

TEST_CASE("Nash-Williams") {
  for (int d = 1; d <= 3; ++d)
    for (std::int64_t l = 0; l <= 6; ++l)
      CHECK(sphere_edge_count(d, l) == 2 * d * static_cast<std::int64_t>(std::pow(2 * l + 1, d - 1)));
  CHECK(nash_williams_bound(1, 3, 10) == 3.5);
  CHECK(std::abs(lattice_ball_resistance(1, 3, 10) - 3.5) <= 1e-10);
  CHECK(nash_williams_bound(2, 1, 4) <= lattice_ball_resistance(2, 1, 4));
  try {
    nash_williams_bound(2, 4, 4);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("lattice tiling capacity") {
  const auto one = zd_tiling_capacity_sum(2, 4, 16, 2.0);
  CHECK(one.tiles == 1);
  const auto lat = lattice_environment(2, 5);
  Capacitor cap;
  for (Vertex v = 0; v < lat.graph.vertex_count(); ++v) {
    const auto r = lat.box.linf(v);
    if (r <= 4) cap.Omega.push_back(v);
    if (r <= 2) cap.A.push_back(v);
  }
  CHECK(one.cap_sum == doctest::Approx(solve_capacitor(lat.graph, cap).capacity).epsilon(1e-9));
  CHECK_THROWS_AS(zd_tiling_capacity_sum(1, 16, 16, 1.0), Error);

  for (int d = 1; d <= 2; ++d) {
    double lo = 1e300, hi = 0;
    for (double t : {16.0, 64.0, 256.0, 1024.0}) {
      const auto rep = zd_tiling_capacity_sum(d, static_cast<std::int64_t>(16 * std::sqrt(t)), t, 2.0);
      lo = std::min(lo, rep.ratio);
      hi = std::max(hi, rep.ratio);
    }
    CHECK(hi / lo <= 2.0);
  }
}

}
