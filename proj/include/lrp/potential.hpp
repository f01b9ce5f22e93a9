#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "lrp/graph.hpp"

namespace lrp {

// Sum over unordered edges of (f(x) - f(y))^2.
template <class Scalar>
Scalar dirichlet_energy(const Graph& g, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f) {
  Scalar acc(0);
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    for (Vertex v : g.neighbors(u))
      if (u < v) {
        const Scalar diff = f[u] - f[v];
        acc += diff * diff;
      }
  return acc;
}

struct Capacitor {
  std::vector<Vertex> A;      // sorted
  std::vector<Vertex> Omega;  // sorted, contains A
};

enum class LinearSolver { cg, direct };

struct SolverOptions {
  double tolerance = 1e-10;          // relative residual
  std::int64_t max_iterations = -1;  // -1: 50 |free|
  LinearSolver solver = LinearSolver::cg;
};

// Equilibrium potential: 1 on A, harmonic on Omega \ A, 0 off Omega.
struct PotentialSolution {
  std::vector<Vertex> support;  // Omega
  Eigen::VectorXd values;       // h on support
  double energy = 0;            // one term per unordered edge
  double capacity = 0;          // 2 * energy
  double flux = 0;              // sum over edges a -> y leaving A of h(a) - h(y)
  double residual = 0;          // max |Laplacian h| on free vertices
  std::int64_t iterations = 0;

  double at(Vertex v) const;
};

PotentialSolution solve_capacitor(const Graph& g, const Capacitor& cap, const SolverOptions& options = {});

struct Resistance {
  double value = 0;  // +inf when A and B are not connected
  bool connected = false;
  double energy = 0;
  Eigen::VectorXd potential;  // 1 on A, 0 on B, harmonic elsewhere
};

Resistance effective_resistance(const Graph& g, std::span<const Vertex> A, std::span<const Vertex> B,
                                const SolverOptions& options = {});

// Number of lattice edges joining the l-infinity spheres of radius l and l+1.
std::int64_t sphere_edge_count(int d, std::int64_t l);

// sum_{l=m}^{n-1} 1 / sphere_edge_count(d, l)
double nash_williams_bound(int d, std::int64_t m, std::int64_t n);

// Resistance between {|x| <= m} and {|x| >= n} on the lattice.
double lattice_ball_resistance(int d, std::int64_t m, std::int64_t n, const SolverOptions& options = {});

struct TilingReport {
  std::int64_t tiles = 0;
  std::int64_t tile_radius = 0;
  std::int64_t inner_radius = 0;
  double cap_sum = 0;
  double ratio = 0;  // cap_sum / (n^d / t)
};

// Tiles [-n, n]^d with l-infinity boxes of radius floor(sqrt t) on the lattice, each with the
// inner box of radius floor((1 - 1/lambda) sqrt t), and sums the capacities.
TilingReport zd_tiling_capacity_sum(int d, std::int64_t n, double t, double lambda,
                                    const SolverOptions& options = {});

}  // namespace lrp
