#include "lrp/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "lrp/error.hpp"

namespace lrp {

Graph Graph::from_edges(Vertex vertex_count, std::span<const Edge> edges) {
  require(vertex_count >= 0, "vertex count must be non-negative");
  if (edges.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max() / 2))
    fail(ErrorKind::resource, "too many edges for 32-bit adjacency offsets");
  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (const auto& [u, v] : edges) {
    require(u >= 0 && v >= 0 && u < vertex_count && v < vertex_count, "edge endpoint out of range");
    require(u != v, "self-loop");
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (Vertex v = 0; v < vertex_count; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.adj_.resize(2 * edges.size());
  std::vector<std::int32_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adj_[fill[u]++] = v;
    g.adj_[fill[v]++] = u;
  }
  for (Vertex v = 0; v < vertex_count; ++v) {
    auto b = g.adj_.begin() + g.offsets_[v];
    auto e = g.adj_.begin() + g.offsets_[v + 1];
    std::sort(b, e);
    require(std::adjacent_find(b, e) == e, "duplicate edge");
  }
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(adj_.size() / 2);
  for (Vertex u = 0; u < vertex_count(); ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::induced(std::span<const Vertex> keep) const {
  std::vector<Vertex> local(vertex_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<Vertex>(i);
  Graph g;
  g.offsets_.assign(keep.size() + 1, 0);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    int c = 0;
    for (Vertex w : neighbors(keep[i]))
      if (local[w] >= 0) ++c;
    g.offsets_[i + 1] = g.offsets_[i] + c;
  }
  g.adj_.resize(g.offsets_.back());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    auto pos = g.offsets_[i];
    for (Vertex w : neighbors(keep[i]))
      if (local[w] >= 0) g.adj_[pos++] = local[w];
  }
  return g;
}

std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex root) {
  std::vector<std::int32_t> dist(g.vertex_count(), -1);
  std::deque<Vertex> queue{root};
  dist[root] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u))
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

}  // namespace lrp
