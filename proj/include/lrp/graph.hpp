#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lrp {

using Vertex = std::int32_t;
using Edge = std::pair<Vertex, Vertex>;

// Simple undirected graph in compressed adjacency form with sorted neighbour lists.
class Graph {
 public:
  Graph() = default;
  // Edges may appear in either orientation; self-loops and duplicates are rejected.
  static Graph from_edges(Vertex vertex_count, std::span<const Edge> edges);

  Vertex vertex_count() const { return static_cast<Vertex>(offsets_.size()) - 1; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(adj_.size()) / 2; }
  int degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }
  bool has_edge(Vertex u, Vertex v) const;

  // Edges with u < v in increasing order.
  std::vector<Edge> edges() const;

  // Subgraph induced on `keep` (sorted); vertex i of the result is keep[i].
  Graph induced(std::span<const Vertex> keep) const;

  const std::vector<std::int32_t>& offsets() const { return offsets_; }
  const std::vector<Vertex>& adjacency_list() const { return adj_; }

  template <class Scalar = double>
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor, std::int32_t> adjacency() const {
    const Vertex n = vertex_count();
    Eigen::SparseMatrix<Scalar, Eigen::RowMajor, std::int32_t> a(n, n);
    a.resizeNonZeros(static_cast<Eigen::Index>(adj_.size()));
    std::copy(offsets_.begin(), offsets_.end(), a.outerIndexPtr());
    std::copy(adj_.begin(), adj_.end(), a.innerIndexPtr());
    std::fill(a.valuePtr(), a.valuePtr() + adj_.size(), Scalar(1));
    return a;
  }

  template <class Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> degrees() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> deg(vertex_count());
    for (Vertex v = 0; v < vertex_count(); ++v) deg[v] = Scalar(degree(v));
    return deg;
  }

 private:
  std::vector<std::int32_t> offsets_{0};
  std::vector<Vertex> adj_;
};

// Graph distances from root (-1 where unreachable).
std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex root);

}  // namespace lrp
