#pragma once

// Brute-force reference matcher for small graphs. Shares nothing with the
// planner or engine beyond the graph containers.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "sgm/csr_graph.hpp"
#include "sgm/query_graph.hpp"

namespace sgm::oracle {

inline constexpr std::size_t kMaxOracleVertices = 14;

/// One data vertex per query vertex, indexed by query vertex.
using MatchRecord = std::vector<VertexId>;

/// Every injective assignment satisfying the isomorphism condition.
inline std::vector<MatchRecord> enumerate_all(const QueryGraph& q, const CsrGraph& g, Variant variant) {
  if (g.vertex_count() > kMaxOracleVertices)
    throw Error("oracle refuses graphs with more than " + std::to_string(kMaxOracleVertices) + " vertices");
  const int n = q.size();
  const auto nv = static_cast<VertexId>(g.vertex_count());
  std::vector<MatchRecord> out;
  MatchRecord cur(n);
  std::vector<bool> used(nv, false);

  auto consistent = [&](int i, VertexId v) {
    for (int j = 0; j < i; ++j) {
      const bool qe = q.adjacent(i, j);
      const bool ge = g.has_edge(v, cur[j]);
      if (qe && !ge) return false;
      if (variant == Variant::kVertexInduced && !qe && ge) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (VertexId v = 0; v < nv; ++v) {
      if (used[v] || !consistent(i, v)) continue;
      used[v] = true;
      cur[i] = v;
      self(self, i + 1);
      used[v] = false;
    }
  };
  rec(rec, 0);
  return out;
}

/// Number of distinct subgraphs: raw matches collapsed on (vertex set, covered edges).
inline std::uint64_t count_unique(const QueryGraph& q, const CsrGraph& g, Variant variant) {
  using Key = std::pair<std::vector<VertexId>, std::vector<std::pair<VertexId, VertexId>>>;
  std::set<Key> seen;
  const auto qedges = q.edges();
  for (const auto& m : enumerate_all(q, g, variant)) {
    Key k;
    k.first = m;
    std::sort(k.first.begin(), k.first.end());
    for (auto [a, b] : qedges) k.second.emplace_back(std::min(m[a], m[b]), std::max(m[a], m[b]));
    std::sort(k.second.begin(), k.second.end());
    seen.insert(std::move(k));
  }
  return seen.size();
}

/// Size of the query's automorphism group, by brute force.
inline std::uint64_t automorphism_count(const QueryGraph& q) {
  std::vector<int> p(q.size());
  for (int i = 0; i < q.size(); ++i) p[i] = i;
  std::uint64_t c = 0;
  do {
    bool ok = true;
    for (int a = 0; a < q.size() && ok; ++a)
      for (int b = a + 1; b < q.size() && ok; ++b) ok = q.adjacent(a, b) == q.adjacent(p[a], p[b]);
    c += ok;
  } while (std::next_permutation(p.begin(), p.end()));
  return c;
}

}  // namespace sgm::oracle
