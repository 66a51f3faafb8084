#pragma once

#include <random>
#include <vector>

#include "sgm/sgm.hpp"

namespace sgm::testing {

/// Connected query on n vertices; each pair is an edge with probability p.
inline QueryGraph random_query(std::mt19937_64& rng, int n, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  for (;;) {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (coin(rng)) e.emplace_back(a, b);
    try {
      return QueryGraph(n, e);
    } catch (const Error&) {
    }
  }
}

/// Sorted distinct ids drawn from [0, universe) with inclusion probability p.
inline VertexSet random_set(std::mt19937_64& rng, VertexId universe, double p) {
  std::bernoulli_distribution coin(p);
  VertexSet s;
  for (VertexId v = 0; v < universe; ++v)
    if (coin(rng)) s.push_back(v);
  return s;
}

inline QueryPlan plan_for(const QueryGraph& q, Variant v, Strategy s) {
  return compile_plan(q, dual_sort_schedule(q, v), s);
}

inline std::uint64_t run_count(const QueryPlan& plan, const CsrGraph& g, ExecConfig cfg = {}) {
  MatchSink sink;
  return execute_parallel(plan, g, sink, cfg).match_count;
}

inline QueryGraph star_query(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return QueryGraph(leaves + 1, e);
}

inline QueryGraph cycle_query(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return QueryGraph(n, e);
}

}  // namespace sgm::testing
