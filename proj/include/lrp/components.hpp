#pragma once

#include <cstdint>
#include <vector>

#include "lrp/environment.hpp"
#include "lrp/stats.hpp"

namespace lrp {

struct ComponentLabels {
  std::vector<std::int32_t> label;  // component ids numbered by smallest member
  std::vector<std::int64_t> size;
  std::int32_t largest = -1;        // ties go to the smaller id
};

// Union-find with path halving and union by size.
ComponentLabels label_components(const Graph& g);

// ceil(log(2n+1)^2)
std::int64_t window_margin(std::int64_t n);

// Largest cluster of the box together with its window W_n.
struct BoxComponent {
  LrpParams params;
  Box box;
  std::vector<Vertex> vertices;  // box indices, sorted
  Graph graph;                   // induced subgraph, local ids
  std::vector<Vertex> local_of;  // box index -> local id, -1 outside
  std::int64_t margin = 0;
  std::int64_t window_box_size = 0;  // |W*_n|
  std::vector<Vertex> window;        // local ids of W_n

  std::int64_t vertex_count() const { return graph.vertex_count(); }
  std::int64_t edge_count() const { return graph.edge_count(); }
  Vertex local(std::int64_t box_index) const { return local_of[box_index]; }
  Point position(Vertex v) const { return box.point(vertices[v]); }
};

BoxComponent largest_component(const Environment& env);

struct ConditionVRow {
  std::int64_t n = 0;
  double c = 0;
  std::int64_t reps = 0;
  double p_hat = 0;
  Interval ci;
};

// Estimates P(|V_n| >= c n^d) for each n and c.
std::vector<ConditionVRow> check_condition_V(const LrpParams& params, const std::vector<double>& c_list,
                                             const std::vector<std::int64_t>& n_list, std::int64_t reps,
                                             int threads = 1);

struct BsRow {
  std::int64_t n = 0;
  std::int64_t margin = 0;
  std::int64_t reps = 0;
  double var_wn_over_n2d = 0;
  Interval var_ci;
  double a_proxy = 0;  // window fraction in a giant-like cluster other than the largest
  Interval a_ci;
};

// Proxy diagnostics for the window conditions. A cluster counts as giant-like when it
// touches the boundary shell or has at least (log n)^{2d} vertices.
std::vector<BsRow> bs_diagnostics(const LrpParams& params, const std::vector<std::int64_t>& n_list,
                                  std::int64_t reps, int threads = 1);

// d = 1 only: x is a cut-point when {x, x+1} is the only edge joining (-inf, x] to [x+1, inf).
std::vector<std::int64_t> find_cut_points(const Environment& env);

}  // namespace lrp
