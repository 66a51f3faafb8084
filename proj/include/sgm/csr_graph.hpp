#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "sgm/common.hpp"
#include "sgm/set_ops.hpp"

namespace sgm {

using Edge = std::pair<std::uint64_t, std::uint64_t>;

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Vertex ids are dense in [0, vertex_count()). Every adjacency slice is
/// strictly ascending and the adjacency relation is symmetric. original_id()
/// maps a dense id back to the id it had in the input edge list.
class CsrGraph {
 public:
  CsrGraph() : offsets_(1, 0) {}

  CsrGraph(std::vector<EdgeIndex> offsets, std::vector<VertexId> neighbors,
           std::vector<std::uint64_t> original_ids = {})
      : offsets_(std::move(offsets)),
        neighbors_(std::move(neighbors)),
        original_ids_(std::move(original_ids)) {
    validate();
    if (original_ids_.empty()) {
      original_ids_.resize(vertex_count());
      for (std::size_t v = 0; v < original_ids_.size(); ++v) original_ids_[v] = v;
    }
    for (std::size_t v = 0; v < vertex_count(); ++v)
      max_degree_ = std::max<std::size_t>(max_degree_, offsets_[v + 1] - offsets_[v]);
  }

  std::size_t vertex_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  std::size_t max_degree() const { return max_degree_; }

  /// Zero-copy view of N(u). Throws std::out_of_range for u >= vertex_count().
  VertexSpan neighbors(VertexId u) const {
    if (u >= vertex_count()) throw std::out_of_range("vertex " + std::to_string(u) + " out of range");
    return adj(u);
  }

  // Unchecked access for the inner loops.
  VertexSpan adj(VertexId u) const {
    return {neighbors_.data() + offsets_[u], static_cast<std::size_t>(offsets_[u + 1] - offsets_[u])};
  }
  std::size_t degree(VertexId u) const { return offsets_[u + 1] - offsets_[u]; }

  bool has_edge(VertexId u, VertexId v) const {
    auto n = adj(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  std::uint64_t original_id(VertexId u) const { return original_ids_[u]; }
  const std::vector<EdgeIndex>& offsets() const { return offsets_; }
  const std::vector<VertexId>& neighbor_array() const { return neighbors_; }

  /// Bytes held by offsets and neighbors (the CSR proper).
  std::size_t csr_bytes() const {
    return offsets_.size() * sizeof(EdgeIndex) + neighbors_.size() * sizeof(VertexId);
  }

  /// Each undirected edge once, as (smaller, larger) dense ids.
  std::vector<Edge> edge_list() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (VertexId u = 0; u < vertex_count(); ++u)
      for (VertexId v : adj(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const CsrGraph& a, const CsrGraph& b) {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  void validate() const {
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != neighbors_.size())
      throw Error("csr: offsets do not frame the neighbor array");
    if (neighbors_.size() % 2 != 0) throw Error("csr: odd neighbor count");
    const std::size_t n = offsets_.size() - 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (offsets_[v] > offsets_[v + 1]) throw Error("csr: offsets decrease");
      auto s = adj(static_cast<VertexId>(v));
      if (!is_strictly_sorted(s)) throw Error("csr: adjacency not strictly ascending");
      for (VertexId w : s) {
        if (w >= n) throw Error("csr: neighbor id out of range");
        if (w == v) throw Error("csr: self-loop");
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      for (VertexId w : adj(static_cast<VertexId>(v)))
        if (!has_edge(w, static_cast<VertexId>(v))) throw Error("csr: adjacency not symmetric");
  }

  std::vector<EdgeIndex> offsets_;
  std::vector<VertexId> neighbors_;
  std::vector<std::uint64_t> original_ids_;
  std::size_t max_degree_ = 0;
};

/// Builds a simple undirected CSR graph from arbitrary id pairs. Ids are
/// reindexed densely keeping their relative order; self-loops are dropped and
/// duplicate edges collapsed.
/// With min_vertices > 0, ids 0..min_vertices-1 are vertices even when isolated.
inline CsrGraph build_csr(const std::vector<Edge>& edges, std::uint64_t min_vertices = 0) {
  std::vector<std::uint64_t> ids;
  ids.reserve(edges.size() * 2 + min_vertices);
  for (std::uint64_t i = 0; i < min_vertices; ++i) ids.push_back(i);
  for (auto [a, b] : edges) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](std::uint64_t x) {
    return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };

  std::vector<std::pair<VertexId, VertexId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    VertexId u = dense(a), v = dense(b);
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  std::vector<EdgeIndex> offsets(ids.size() + 1, 0);
  std::vector<VertexId> neighbors;
  neighbors.reserve(arcs.size());
  for (auto [u, v] : arcs) {
    ++offsets[u + 1];
    neighbors.push_back(v);
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  return CsrGraph(std::move(offsets), std::move(neighbors), std::move(ids));
}

/// Counts triangles {a < b < c} by merging N+(a) with N+(b).
inline std::uint64_t triangle_count(const CsrGraph& g) {
  std::uint64_t total = 0;
  for (VertexId a = 0; a < g.vertex_count(); ++a) {
    auto na = g.adj(a);
    auto higher_a = na.subspan(std::upper_bound(na.begin(), na.end(), a) - na.begin());
    for (VertexId b : higher_a) {
      auto nb = g.adj(b);
      auto higher_b = nb.subspan(std::upper_bound(nb.begin(), nb.end(), b) - nb.begin());
      ScanCount scan;
      total += intersect_into(higher_a, higher_b, nullptr, kNoBound, scan);
    }
  }
  return total;
}

struct GraphStats {
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t triangle_count = 0;
  std::uint64_t max_degree = 0;
  double p1 = 0.0;  // edge probability between two random vertices
  double p2 = 0.0;  // edge probability between two vertices with a common neighbor
};

inline GraphStats graph_stats(const CsrGraph& g) {
  GraphStats s;
  s.vertex_count = g.vertex_count();
  s.edge_count = g.edge_count();
  s.max_degree = g.max_degree();
  s.triangle_count = triangle_count(g);
  if (s.vertex_count == 0 || s.edge_count == 0) return s;
  const double v = static_cast<double>(s.vertex_count);
  const double e2 = 2.0 * static_cast<double>(s.edge_count);
  s.p1 = e2 / (v * v);
  s.p2 = static_cast<double>(s.triangle_count) * v / (e2 * e2);
  return s;
}

}  // namespace sgm
