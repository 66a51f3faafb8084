#pragma once

// Runtime auxiliary graphs: pruned adjacency lists P(u) = F ∩ N(u) for every
// u of a selecting set, where F is the filtering prefix set. Entries the
// online strategy declines to prune fall back to N(u); high-degree entries
// get reserved space and are pruned on first lookup.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <new>

#include "sgm/arena.hpp"
#include "sgm/cost_model.hpp"
#include "sgm/csr_graph.hpp"
#include "sgm/plan.hpp"
#include "sgm/set_ops.hpp"

namespace sgm {

enum class EntryStatus : std::uint8_t {
  kPruned,    // stored list is final
  kDeferred,  // no storage; lookups read N(u)
  kLazy,      // storage reserved; pruned by the first lookup
  kClaimed,   // a lookup is pruning it right now
};

struct AuxEntry {
  VertexId* data = nullptr;
  std::uint32_t size = 0;
  std::uint32_t capacity = 0;
};

/// Where the elements scanned while pruning one list came from.
struct PruneScan {
  ScanCount scan;         // a = filtering set, b = source list
  bool source_pruned;     // source list was itself a pruned list
  VertexId vertex;
  bool lazy = false;      // pruned on first lookup rather than at build time
};

class AuxGraphInstance {
 public:
  struct View {
    VertexSpan list;
    bool pruned = false;
  };

  int directive = -1;
  VertexSpan index;     // selecting set at build time, sorted
  VertexSpan filtering;
  bool self_bound = false;
  const AuxGraphInstance* source = nullptr;
  const CsrGraph* graph = nullptr;
  std::atomic<EntryStatus>* status = nullptr;
  AuxEntry* entries = nullptr;

  std::size_t size() const { return index.size(); }

  /// Position of u in the index, or size() when absent.
  std::size_t find(VertexId u) const {
    auto it = std::lower_bound(index.begin(), index.end(), u);
    return (it != index.end() && *it == u) ? static_cast<std::size_t>(it - index.begin()) : index.size();
  }

  /// List to use in place of N(u). Vertices outside the index read N(u).
  /// on_prune receives the scans of a lazy prune, if one happens.
  template <class OnPrune>
  View lookup(VertexId u, OnPrune&& on_prune) const {
    const std::size_t pos = find(u);
    if (pos == size()) return {graph->adj(u), false};
    EntryStatus st = status[pos].load(std::memory_order_acquire);
    if (st == EntryStatus::kLazy) {
      if (status[pos].compare_exchange_strong(st, EntryStatus::kClaimed, std::memory_order_acq_rel)) {
        prune_into(pos, u, on_prune, true);
        status[pos].store(EntryStatus::kPruned, std::memory_order_release);
        st = EntryStatus::kPruned;
      }
    }
    if (st == EntryStatus::kPruned) return {{entries[pos].data, entries[pos].size}, true};
    return {graph->adj(u), false};
  }

  View lookup(VertexId u) const {
    return lookup(u, [](const PruneScan&) {});
  }

  EntryStatus entry_status(std::size_t pos) const { return status[pos].load(std::memory_order_acquire); }

  /// The list pruning starts from: N(u), or the source graph's list for u.
  template <class OnPrune>
  View source_list(VertexId u, OnPrune& on_prune) const {
    return source ? source->lookup(u, on_prune) : View{graph->adj(u), false};
  }

  template <class OnPrune>
  void prune_into(std::size_t pos, VertexId u, OnPrune& on_prune, bool lazy = false) const {
    const View src = source_list(u, on_prune);
    PruneScan ps{{}, src.pruned, u, lazy};
    auto& e = entries[pos];
    const std::size_t n = intersect_into(filtering, src.list, e.data, self_bound ? u : kNoBound, ps.scan);
    e.size = static_cast<std::uint32_t>(n);
    on_prune(ps);
  }
};

struct AuxBuildStats {
  std::size_t pruned = 0;
  std::size_t deferred = 0;
  std::size_t lazy = 0;
};

struct AuxBuildRequest {
  const AuxDirective* directive = nullptr;
  VertexSpan selecting;
  VertexSpan filtering;
  const AuxGraphInstance* source = nullptr;
  Gate gate = Gate::kAlways;
  double extensions = 0.0;  // estimated reuse count, cost-model gate only
  std::size_t high_degree_threshold = 0;
};

/// Builds one auxiliary graph in `arena`. The storage for all pruned lists is
/// sized up front from the selecting set, then trimmed to what was used.
template <class OnPrune>
AuxGraphInstance* build_aux(const AuxBuildRequest& req, const CsrGraph& g, Arena& arena, AuxBuildStats& stats,
                            OnPrune&& on_prune) {
  auto* inst = new (arena.allocate<AuxGraphInstance>(1)) AuxGraphInstance();
  inst->directive = req.directive->id;
  inst->index = req.selecting;
  inst->filtering = req.filtering;
  inst->self_bound = req.directive->self_bound;
  inst->source = req.source;
  inst->graph = &g;
  const std::size_t n = req.selecting.size();
  inst->status = arena.allocate<std::atomic<EntryStatus>>(n);
  inst->entries = arena.allocate<AuxEntry>(n);

  std::size_t reserve = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const VertexId u = req.selecting[p];
    // N(u) bounds the source list even for chained builds.
    const std::size_t src_len = g.degree(u);
    EntryStatus st = EntryStatus::kPruned;
    if (req.gate == Gate::kCostModel) {
      if (g.degree(u) >= req.high_degree_threshold)
        st = EntryStatus::kLazy;
      else if (estimate_gain(req.extensions, req.filtering.size(), src_len, g.vertex_count()) <= 0.0)
        st = EntryStatus::kDeferred;
    }
    new (&inst->status[p]) std::atomic<EntryStatus>(st);
    auto& e = inst->entries[p];
    e = AuxEntry{};
    if (st != EntryStatus::kDeferred) {
      e.capacity = static_cast<std::uint32_t>(std::min(src_len, req.filtering.size()));
      reserve += e.capacity;
    }
    switch (st) {
      case EntryStatus::kPruned: ++stats.pruned; break;
      case EntryStatus::kDeferred: ++stats.deferred; break;
      default: ++stats.lazy; break;
    }
  }

  VertexId* buffer = arena.allocate<VertexId>(reserve);
  std::size_t used = 0;
  for (std::size_t p = 0; p < n; ++p) {
    auto& e = inst->entries[p];
    const auto st = inst->status[p].load(std::memory_order_relaxed);
    if (st == EntryStatus::kDeferred) continue;
    e.data = buffer + used;
    if (st == EntryStatus::kPruned) {
      inst->prune_into(p, req.selecting[p], on_prune);
      used += e.size;
    } else {
      used += e.capacity;
    }
  }
  arena.shrink_last(buffer, reserve, used);
  return inst;
}

}  // namespace sgm
