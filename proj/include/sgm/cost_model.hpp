#pragma once

// Online pruning cost model.
//
// Candidate-set cardinalities are extrapolated from the live size of a prefix
// set by multiplying one edge probability per future intersection: p2 when the
// two positions are known to share an earlier neighbour, p1 otherwise. The
// product only depends on the query and graph statistics, so it is folded into
// one constant per prefix set when the state is built.

#include <algorithm>
#include <vector>

#include "sgm/csr_graph.hpp"
#include "sgm/plan.hpp"

namespace sgm {

struct ExtensionTerm {
  double factor = 1.0;            // product of per-position multipliers
  std::vector<int> live_slots;    // storage slots whose live sizes multiply in; -1 means |V(G)|
};

struct CostModelState {
  GraphStats stats;
  double p1 = 0.0;
  double p2 = 0.0;  // clamped to 1
  std::size_t high_degree_threshold = 64;
  std::vector<double> slot_factor;                       // by slot id
  std::vector<std::vector<ExtensionTerm>> extension;     // by directive, one term per use site
};

/// Multiplier turning |C_h(i)| into an estimate of |C(i)| for the prefix set
/// at (depth h, target i): one factor per later backward neighbour l of i.
inline double cardinality_factor(const QueryPlan& plan, int depth, int target, double p1, double p2) {
  const auto& q = plan.query;
  const auto& order = plan.schedule.order;
  auto adj = [&](int a, int b) { return q.adjacent(order[a], order[b]); };
  double f = 1.0;
  for (int l = depth; l < target; ++l) {
    if (!adj(target, l)) continue;
    bool wedge = false;
    for (int t = 0; t < std::min(target, l) && !wedge; ++t) wedge = adj(t, l) && adj(t, target);
    f *= wedge ? p2 : p1;
  }
  return f;
}

inline std::size_t default_high_degree_threshold(const CsrGraph& g) {
  const std::size_t avg8 = g.vertex_count() ? g.edge_count() * 8 / g.vertex_count() : 0;
  return std::max<std::size_t>(64, avg8);
}

/// Precomputes every constant the online strategy needs for one (plan, graph)
/// pair. A zero threshold selects default_high_degree_threshold.
inline CostModelState make_cost_model(const QueryPlan& plan, const CsrGraph& g,
                                      std::size_t high_degree_threshold = 0) {
  CostModelState st;
  st.stats = graph_stats(g);
  st.p1 = std::clamp(st.stats.p1, 0.0, 1.0);
  st.p2 = std::clamp(st.stats.p2, 0.0, 1.0);
  st.high_degree_threshold = high_degree_threshold ? high_degree_threshold : default_high_degree_threshold(g);
  for (const auto& s : plan.slots) st.slot_factor.push_back(cardinality_factor(plan, s.depth, s.target, st.p1, st.p2));

  for (const auto& d : plan.directives) {
    std::vector<ExtensionTerm> terms;
    for (const auto& use : d.uses) {
      // |e(I_h, k, u)| ~ prod_{p in [h, k]} est|C(p)| / |C_h(k)|, with k the selected position.
      const int selected = use.depth - 1;
      ExtensionTerm t;
      t.factor = cardinality_factor(plan, d.depth, selected, st.p1, st.p2);
      for (int p = d.depth; p < selected; ++p) {
        const int sid = plan.table[d.depth][p];
        t.factor *= cardinality_factor(plan, d.depth, p, st.p1, st.p2);
        t.live_slots.push_back(sid >= 0 ? plan.slots[sid].storage() : -1);
      }
      terms.push_back(std::move(t));
    }
    st.extension.push_back(std::move(terms));
  }
  return st;
}

/// Estimated |C(target)| from the live size of the slot's prefix set.
inline double estimate_card(const CostModelState& st, int slot_id, std::size_t live_size) {
  return static_cast<double>(live_size) * st.slot_factor.at(slot_id);
}

/// Gain in scanned elements from pruning one adjacency list:
/// e * (|N(u)| - est|C_h(i) ∩ N(u)|) - (|C_h(i)| + |N(u)|), with the
/// intersection estimated as |C_h(i)| |N(u)| / |V(G)|.
inline double estimate_gain(double extensions, std::size_t filtering_size, std::size_t list_size,
                            std::size_t vertex_count) {
  const double c = static_cast<double>(filtering_size);
  const double d = static_cast<double>(list_size);
  const double shared = vertex_count ? c * d / static_cast<double>(vertex_count) : d;
  return extensions * (d - shared) - (c + d);
}

}  // namespace sgm
