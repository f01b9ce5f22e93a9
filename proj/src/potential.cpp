#include "lrp/potential.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "lrp/environment.hpp"
#include "lrp/error.hpp"

namespace lrp {

namespace {

enum Role : std::uint8_t { kFree = 0, kOne = 1, kZero = 2 };

struct DirichletResult {
  Eigen::VectorXd h;
  double residual = 0;
  std::int64_t iterations = 0;
};

// Solves Lh = 0 on free vertices with h = 1 on kOne and h = 0 on kZero. Free vertices that
// cannot reach a fixed vertex get h = 0.
DirichletResult solve_dirichlet(const Graph& g, const std::vector<std::uint8_t>& role,
                                const SolverOptions& options) {
  const Vertex n = g.vertex_count();
  std::vector<char> anchored(n, 0);
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < n; ++v)
    if (role[v] != kFree) {
      for (Vertex w : g.neighbors(v))
        if (role[w] == kFree && !anchored[w]) {
          anchored[w] = 1;
          queue.push_back(w);
        }
    }
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u))
      if (role[w] == kFree && !anchored[w]) {
        anchored[w] = 1;
        queue.push_back(w);
      }
  }
  std::vector<Vertex> idx(n, -1), free;
  for (Vertex v = 0; v < n; ++v)
    if (role[v] == kFree && anchored[v]) {
      idx[v] = static_cast<Vertex>(free.size());
      free.push_back(v);
    }
  DirichletResult out;
  out.h = Eigen::VectorXd::Zero(n);
  for (Vertex v = 0; v < n; ++v)
    if (role[v] == kOne) out.h[v] = 1.0;
  if (free.empty()) return out;

  const Eigen::Index m = static_cast<Eigen::Index>(free.size());
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vertex v = free[i];
    trips.emplace_back(i, i, static_cast<double>(g.degree(v)));
    for (Vertex w : g.neighbors(v)) {
      if (idx[w] >= 0)
        trips.emplace_back(i, idx[w], -1.0);
      else if (role[w] == kOne)
        b[i] += 1.0;
    }
  }
  Eigen::SparseMatrix<double> L(m, m);
  L.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd x;
  if (options.solver == LinearSolver::direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
    if (ldlt.info() != Eigen::Success) fail(ErrorKind::convergence, "LDLT factorisation failed");
    x = ldlt.solve(b);
    out.iterations = 1;
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(options.tolerance);
    cg.setMaxIterations(options.max_iterations > 0 ? options.max_iterations : 50 * m);
    cg.compute(L);
    x = cg.solve(b);
    out.iterations = cg.iterations();
    if (cg.info() != Eigen::Success)
      fail(ErrorKind::convergence, "conjugate gradient did not converge: relative residual " +
                                       std::to_string(cg.error()) + " after " + std::to_string(cg.iterations()) +
                                       " iterations");
  }
  for (Eigen::Index i = 0; i < m; ++i) out.h[free[i]] = std::clamp(x[i], 0.0, 1.0);
  for (Vertex v : free) {
    double lap = g.degree(v) * out.h[v];
    for (Vertex w : g.neighbors(v)) lap -= out.h[w];
    out.residual = std::max(out.residual, std::abs(lap));
  }
  return out;
}

void check_sorted_ids(std::span<const Vertex> s, Vertex n, const char* what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] >= 0 && s[i] < n, std::string(what) + ": vertex out of range");
    require(i == 0 || s[i - 1] < s[i], std::string(what) + ": must be sorted without repeats");
  }
}

}  // namespace

double PotentialSolution::at(Vertex v) const {
  auto it = std::lower_bound(support.begin(), support.end(), v);
  if (it == support.end() || *it != v) return 0.0;
  return values[it - support.begin()];
}

PotentialSolution solve_capacitor(const Graph& g, const Capacitor& cap, const SolverOptions& options) {
  check_sorted_ids(cap.A, g.vertex_count(), "capacitor A");
  check_sorted_ids(cap.Omega, g.vertex_count(), "capacitor Omega");
  if (!std::includes(cap.Omega.begin(), cap.Omega.end(), cap.A.begin(), cap.A.end()))
    fail(ErrorKind::precondition, "capacitor: A is not contained in Omega");

  // Work on Omega plus its outer boundary; every edge touching Omega lives there.
  std::vector<Vertex> local_of(g.vertex_count(), -1);
  std::vector<Vertex> keep(cap.Omega);
  for (Vertex v : cap.Omega) local_of[v] = 0;
  for (Vertex v : cap.Omega)
    for (Vertex w : g.neighbors(v))
      if (local_of[w] < 0) {
        local_of[w] = 0;
        keep.push_back(w);
      }
  std::sort(keep.begin(), keep.end());
  for (std::size_t i = 0; i < keep.size(); ++i) local_of[keep[i]] = static_cast<Vertex>(i);
  const Graph sub = g.induced(keep);
  std::vector<std::uint8_t> role(keep.size(), kZero);
  for (Vertex v : cap.Omega) role[local_of[v]] = kFree;
  for (Vertex v : cap.A) role[local_of[v]] = kOne;

  const auto res = solve_dirichlet(sub, role, options);
  PotentialSolution sol;
  sol.support = cap.Omega;
  sol.values.resize(static_cast<Eigen::Index>(cap.Omega.size()));
  for (std::size_t i = 0; i < cap.Omega.size(); ++i) sol.values[i] = res.h[local_of[cap.Omega[i]]];
  sol.energy = dirichlet_energy<double>(sub, res.h);
  sol.capacity = 2.0 * sol.energy;
  for (Vertex a : cap.A)
    for (Vertex w : sub.neighbors(local_of[a]))
      if (role[w] != kOne) sol.flux += 1.0 - res.h[w];
  sol.residual = res.residual;
  sol.iterations = res.iterations;
  return sol;
}

Resistance effective_resistance(const Graph& g, std::span<const Vertex> A, std::span<const Vertex> B,
                                const SolverOptions& options) {
  require(!A.empty() && !B.empty(), "effective_resistance: A and B must be non-empty");
  std::vector<std::uint8_t> role(g.vertex_count(), kFree);
  for (Vertex a : A) {
    require(a >= 0 && a < g.vertex_count(), "effective_resistance: vertex out of range");
    role[a] = kOne;
  }
  for (Vertex b : B) {
    require(b >= 0 && b < g.vertex_count(), "effective_resistance: vertex out of range");
    require(role[b] != kOne, "effective_resistance: A and B overlap");
    role[b] = kZero;
  }
  Resistance r;
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<Vertex> queue(A.begin(), A.end());
  for (Vertex a : A) seen[a] = 1;
  while (!queue.empty() && !r.connected) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u)) {
      if (seen[w]) continue;
      seen[w] = 1;
      if (role[w] == kZero) r.connected = true;
      queue.push_back(w);
    }
  }
  if (!r.connected) {
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  const auto res = solve_dirichlet(g, role, options);
  r.potential = res.h;
  r.energy = dirichlet_energy<double>(g, res.h);
  r.value = 1.0 / r.energy;
  return r;
}

std::int64_t sphere_edge_count(int d, std::int64_t l) {
  require(d >= 1 && d <= 4 && l >= 0, "sphere_edge_count: bad arguments");
  std::int64_t count = 0;
  for_each_in_cube(d, l, [&](const Point& x) {
    if (linf_of(x, d) != l) return;
    for (int i = 0; i < d; ++i)
      for (int sgn : {-1, 1}) {
        Point y = x;
        y[i] += sgn;
        if (linf_of(y, d) == l + 1) ++count;
      }
  });
  return count;
}

double nash_williams_bound(int d, std::int64_t m, std::int64_t n) {
  require_pre(m >= 0 && m < n, "nash_williams_bound: need 0 <= m < n");
  double acc = 0;
  for (std::int64_t l = m; l < n; ++l) acc += 1.0 / static_cast<double>(sphere_edge_count(d, l));
  return acc;
}

double lattice_ball_resistance(int d, std::int64_t m, std::int64_t n, const SolverOptions& options) {
  require_pre(m >= 0 && m < n, "lattice_ball_resistance: need 0 <= m < n");
  const auto env = lattice_environment(d, n);
  std::vector<Vertex> A, B;
  for (Vertex v = 0; v < env.graph.vertex_count(); ++v) {
    const auto r = env.box.linf(v);
    if (r <= m) A.push_back(v);
    if (r >= n) B.push_back(v);
  }
  return effective_resistance(env.graph, A, B, options).value;
}

TilingReport zd_tiling_capacity_sum(int d, std::int64_t n, double t, double lambda, const SolverOptions& options) {
  require(lambda > 1.0, "zd_tiling_capacity_sum: lambda must exceed 1");
  require(t >= 1.0 && n >= 1, "zd_tiling_capacity_sum: need t >= 1 and n >= 1");
  TilingReport rep;
  rep.tile_radius = static_cast<std::int64_t>(std::floor(std::sqrt(t)));
  rep.inner_radius = static_cast<std::int64_t>(std::floor((1.0 - 1.0 / lambda) * std::sqrt(t)));
  const std::int64_t r = rep.tile_radius;
  require(2 * r + 1 <= 2 * n + 1, "zd_tiling_capacity_sum: tile larger than the box");
  const auto env = lattice_environment(d, n + 1);
  std::vector<std::int64_t> centres;
  for (std::int64_t c = -n + r; c + r <= n; c += 2 * r + 1) centres.push_back(c);
  const std::int64_t per_axis = static_cast<std::int64_t>(centres.size());
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  for (std::int64_t k = 0; k < total; ++k) {
    Point c{};
    std::int64_t rem = k;
    for (int i = 0; i < d; ++i) {
      c[i] = centres[rem % per_axis];
      rem /= per_axis;
    }
    Capacitor cap;
    for_each_in_cube(d, r, [&](const Point& off) {
      Point x{};
      for (int i = 0; i < d; ++i) x[i] = c[i] + off[i];
      const auto v = static_cast<Vertex>(env.box.index(x));
      cap.Omega.push_back(v);
      if (linf_of(off, d) <= rep.inner_radius) cap.A.push_back(v);
    });
    std::sort(cap.Omega.begin(), cap.Omega.end());
    std::sort(cap.A.begin(), cap.A.end());
    rep.cap_sum += solve_capacitor(env.graph, cap, options).capacity;
    ++rep.tiles;
  }
  rep.ratio = rep.cap_sum / (std::pow(static_cast<double>(n), d) / t);
  return rep;
}

}  // namespace lrp
