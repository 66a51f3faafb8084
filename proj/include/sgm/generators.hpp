#pragma once

// Seeded synthetic graphs. Output is a deterministic function of the
// parameters and seed.

#include <algorithm>
#include <random>
#include <vector>

#include "sgm/csr_graph.hpp"

namespace sgm {

/// G(n, p): each of the n(n-1)/2 pairs is included independently.
inline std::vector<Edge> erdos_renyi_edges(std::uint64_t n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw Error("edge probability must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::uint64_t u = 0; u < n; ++u)
    for (std::uint64_t v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return edges;
}

/// Preferential attachment: start from a clique on m+1 vertices, then each new
/// vertex links to m distinct existing vertices picked proportionally to degree.
inline std::vector<Edge> power_law_edges(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  if (m == 0) throw Error("power-law generator needs m >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::vector<std::uint64_t> ends;  // each vertex appears once per incident edge
  const std::uint64_t core = std::min(n, m + 1);
  for (std::uint64_t u = 0; u < core; ++u)
    for (std::uint64_t v = u + 1; v < core; ++v) {
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  std::vector<std::uint64_t> picked;
  for (std::uint64_t u = core; u < n; ++u) {
    picked.clear();
    std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
    while (picked.size() < m) {
      const std::uint64_t v = ends[pick(rng)];
      if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
    }
    for (std::uint64_t v : picked) {
      edges.emplace_back(v, u);
      ends.push_back(v);
      ends.push_back(u);
    }
  }
  return edges;
}

inline std::vector<Edge> clique_edges(std::uint64_t n) {
  std::vector<Edge> edges;
  for (std::uint64_t u = 0; u < n; ++u)
    for (std::uint64_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return edges;
}

inline CsrGraph erdos_renyi(std::uint64_t n, double p, std::uint64_t seed) {
  // Isolated vertices are kept so |V| = n.
  auto edges = erdos_renyi_edges(n, p, seed);
  return build_csr(edges, n);
}

inline CsrGraph power_law(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  return build_csr(power_law_edges(n, m, seed), n);
}

inline CsrGraph complete_graph(std::uint64_t n) { return build_csr(clique_edges(n), n); }

}  // namespace sgm
