#pragma once

// Query plan compilation.
//
// A plan is a loop nest: depth d means d query positions are matched. At each
// depth the plan lists the prefix sets to materialize, the auxiliary graphs to
// build and the slot whose elements are the candidates for position d. Every
// operand is resolved here, so execution never searches for a prefix set or an
// auxiliary graph.
//
// Notation used in comments: C_h(i) is the prefix set of position i computed
// at depth h; A_h(k, i) is the auxiliary graph built at depth h that prunes
// N(u_k) for the computation of C_{k+1}(i).

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgm/common.hpp"
#include "sgm/query_graph.hpp"
#include "sgm/schedule.hpp"

namespace sgm {

/// Identity of a prefix set: the positions whose adjacency lists are
/// intersected or subtracted, and the positions bounding it from above.
struct SlotKey {
  std::uint32_t intersect = 0;
  std::uint32_t subtract = 0;
  std::uint32_t bound = 0;

  bool operator==(const SlotKey&) const = default;
  auto operator<=>(const SlotKey&) const = default;

  /// True when this set is structurally contained in `coarser`.
  bool refines(const SlotKey& coarser) const {
    return (coarser.intersect & ~intersect) == 0 && (coarser.subtract & ~subtract) == 0 &&
           (coarser.bound & ~bound) == 0;
  }
};

enum class SetOp : std::uint8_t { kIntersect, kSubtract };

struct Operand {
  enum class Kind : std::uint8_t { kAdjacency, kSlot, kAux };
  Kind kind = Kind::kAdjacency;
  int ref = -1;       // slot id (kSlot) or directive id (kAux)
  int position = -1;  // matched position whose vertex is looked up (kAdjacency, kAux)

  static Operand adjacency(int pos) { return {Kind::kAdjacency, -1, pos}; }
  static Operand slot(int id) { return {Kind::kSlot, id, -1}; }
  static Operand aux(int dir, int pos) { return {Kind::kAux, dir, pos}; }
  bool operator==(const Operand&) const = default;
};

struct Step {
  SetOp op;
  Operand operand;
  bool operator==(const Step&) const = default;
};

struct PrefixSlot {
  int id = -1;
  int target = -1;  // position whose candidates this set bounds
  int depth = -1;   // number of matched positions when it is available
  SlotKey key;
  int parent = -1;    // slot (depth-1, target), if materialized
  int alias_of = -1;  // computing slot providing the storage, -1 if this one computes
  Operand base;       // computing slots only
  std::vector<Step> steps;
  std::uint32_t bound_positions = 0;  // ids of u_p for these p bound the result from above

  bool computes() const { return alias_of < 0; }
  int storage() const { return computes() ? id : alias_of; }
  bool operator==(const PrefixSlot&) const = default;
};

enum class Gate : std::uint8_t { kAlways, kCostModel };

struct UseSite {
  int depth;   // loop k where C_k(target) is computed from the pruned list
  int target;  // position i
  int slot;    // computing slot whose operand reads the auxiliary graph
  auto operator<=>(const UseSite&) const = default;
};

struct AuxDirective {
  int id = -1;
  int depth = -1;            // build loop h
  int selecting_slot = -1;   // C_h(k)
  int filtering_slot = -1;   // C_h(i)
  std::vector<UseSite> uses;
  int build_source = -1;     // prior directive whose pruned lists feed this build
  bool self_bound = false;   // every use bounds the target below the selected vertex
  Gate gate = Gate::kAlways;
};

using SlotTable = std::array<std::array<int, kMaxQueryVertices>, kMaxQueryVertices + 1>;

struct LoopPlan {
  int depth = 0;
  std::vector<int> compute_slots;
  std::vector<int> build_aux;
  int candidate_slot = -1;  // storage of C_{depth}(depth); -1 at depth 0 (all vertices)
  std::uint32_t upper_bounds = 0;     // positions p with u_depth < u_p
  std::uint32_t lower_bounds = 0;     // positions p with u_depth > u_p
  std::uint32_t distinct_from = 0;    // earlier positions not excluded by an intersection
};

struct QueryPlan {
  QueryGraph query;
  Schedule schedule;
  Variant variant = Variant::kEdgeInduced;
  Strategy strategy = Strategy::kNone;
  std::vector<PrefixSlot> slots;
  std::vector<AuxDirective> directives;
  std::vector<LoopPlan> loops;  // indexed by depth 0..n-1
  SlotTable table{};

  int size() const { return schedule.size(); }
};

namespace detail {

/// Query adjacency re-expressed on positions.
struct PositionGraph {
  int n = 0;
  std::array<std::uint32_t, kMaxQueryVertices> adj{};
  OrderMatrix less{};

  PositionGraph(const QueryGraph& q, const Schedule& s) : n(s.size()) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (q.adjacent(s.order[a], s.order[b])) adj[a] |= 1u << b;
    less = restriction_closure(n, s.restrictions);
  }
  bool adjacent(int a, int b) const { return (adj[a] >> b) & 1u; }
  std::uint32_t upper_bounds(int i) const {
    std::uint32_t m = 0;
    for (int p = 0; p < n; ++p)
      if (less[i][p]) m |= 1u << p;
    return m;
  }
  std::uint32_t lower_bounds(int i) const {
    std::uint32_t m = 0;
    for (int p = 0; p < n; ++p)
      if (less[p][i]) m |= 1u << p;
    return m;
  }
};

inline std::uint32_t below(int depth) { return (1u << depth) - 1; }

inline SlotTable empty_table() {
  SlotTable t;
  for (auto& row : t) row.fill(-1);
  return t;
}

}  // namespace detail

inline SlotTable slot_table(const std::vector<PrefixSlot>& slots) {
  auto t = detail::empty_table();
  for (const auto& s : slots) t[s.depth][s.target] = s.id;
  return t;
}

/// Prefix sets C_h(i) for every h <= i with a backward neighbour among the
/// first h positions. Each set is derived from C_{h-1}(i) with one operand on
/// N(u_{h-1}); the first one intersects the first backward neighbour and
/// subtracts earlier non-neighbours (vertex-induced only). Sets whose content
/// is unchanged at a depth, or identical to another target's set at the same
/// depth, become aliases.
inline std::vector<PrefixSlot> plan_prefix_sets(const QueryGraph& q, const Schedule& s) {
  const detail::PositionGraph pg(q, s);
  const bool vertex_induced = s.variant == Variant::kVertexInduced;
  std::vector<PrefixSlot> slots;
  std::array<int, kMaxQueryVertices> last{};
  last.fill(-1);

  for (int h = 1; h < pg.n; ++h) {
    for (int i = h; i < pg.n; ++i) {
      const std::uint32_t seen = detail::below(h);
      SlotKey key;
      key.intersect = pg.adj[i] & seen;
      if (key.intersect == 0) continue;
      key.subtract = vertex_induced ? (~pg.adj[i] & seen) : 0;
      key.bound = pg.upper_bounds(i) & seen;

      PrefixSlot slot;
      slot.id = static_cast<int>(slots.size());
      slot.target = i;
      slot.depth = h;
      slot.parent = last[i];
      const int fresh = h - 1;
      const bool new_operand = pg.adjacent(i, fresh) || vertex_induced;

      if (slot.parent >= 0 && !new_operand) {
        slot.key = slots[slot.parent].key;
        slot.alias_of = slots[slot.parent].storage();
      } else {
        slot.key = key;
        for (const auto& other : slots)
          if (other.depth == h && other.computes() && other.key == key) {
            slot.alias_of = other.id;
            break;
          }
        if (slot.computes()) {
          slot.bound_positions = key.bound;
          const SetOp op = pg.adjacent(i, fresh) ? SetOp::kIntersect : SetOp::kSubtract;
          if (slot.parent >= 0) {
            slot.base = Operand::slot(slots[slot.parent].storage());
            slot.steps.push_back({op, Operand::adjacency(fresh)});
          } else {
            // First materialization: position h-1 is the only backward neighbour so far.
            slot.base = Operand::adjacency(fresh);
            for (int p = 0; p < fresh; ++p)
              if ((key.subtract >> p) & 1u) slot.steps.push_back({SetOp::kSubtract, Operand::adjacency(p)});
          }
        }
      }
      last[i] = slot.id;
      slots.push_back(std::move(slot));
    }
  }
  return slots;
}

/// Candidate auxiliary graphs: for each prefix set C_k(i) computed at loop k
/// (3 <= k <= n-1, 1-based loops) with an operation on N(u_k), and each
/// h <= k-2 where both C_h(i) and C_h(v_k) are materialized, emit A_h(v_k, i).
inline std::vector<AuxDirective> find_aux_graphs(const QueryGraph& q, const Schedule& s,
                                                 const std::vector<PrefixSlot>& slots) {
  (void)q;
  const int n = s.size();
  const auto table = slot_table(slots);
  std::vector<AuxDirective> out;
  for (int k = 3; k <= n - 1; ++k) {
    const int selected = k - 1;  // position matched at loop k
    for (const auto& use : slots) {
      if (use.depth != k || !use.computes() || use.parent < 0) continue;
      for (int h = 1; h <= k - 2; ++h) {
        const int filtering = table[h][use.target];
        const int selecting = table[h][selected];
        if (filtering < 0 || selecting < 0) continue;
        AuxDirective d;
        d.id = static_cast<int>(out.size());
        d.depth = h;
        d.selecting_slot = selecting;
        d.filtering_slot = filtering;
        d.uses.push_back({k, use.target, use.id});
        out.push_back(std::move(d));
      }
    }
  }
  return out;
}

/// Merges directives with the same depth, selecting set and filtering set;
/// the survivor serves every use site of the merged ones.
inline std::vector<AuxDirective> dedup_aux_graphs(const std::vector<AuxDirective>& dirs,
                                                  const std::vector<PrefixSlot>& slots) {
  std::vector<AuxDirective> out;
  for (const auto& d : dirs) {
    auto same = std::find_if(out.begin(), out.end(), [&](const AuxDirective& o) {
      return o.depth == d.depth && slots[o.selecting_slot].key == slots[d.selecting_slot].key &&
             slots[o.filtering_slot].key == slots[d.filtering_slot].key;
    });
    if (same == out.end()) {
      out.push_back(d);
      out.back().id = static_cast<int>(out.size()) - 1;
    } else {
      same->uses.insert(same->uses.end(), d.uses.begin(), d.uses.end());
    }
  }
  for (auto& d : out) {
    std::sort(d.uses.begin(), d.uses.end());
    d.uses.erase(std::unique(d.uses.begin(), d.uses.end()), d.uses.end());
  }
  return out;
}

/// Points each directive at the deepest earlier directive whose selecting and
/// filtering sets structurally contain its own, so its pruned lists are built
/// from that directive's lists: P_{h',k}(u|i) = C_{h'}(i) ∩ P_{h,k}(u|i).
inline std::vector<AuxDirective> link_reuse_chains(std::vector<AuxDirective> dirs,
                                                   const std::vector<PrefixSlot>& slots) {
  for (auto& d : dirs) {
    d.build_source = -1;
    for (const auto& src : dirs) {
      if (src.depth >= d.depth) continue;
      if (!slots[d.selecting_slot].key.refines(slots[src.selecting_slot].key)) continue;
      if (!slots[d.filtering_slot].key.refines(slots[src.filtering_slot].key)) continue;
      if (src.self_bound && !d.self_bound) continue;
      if (d.build_source < 0 || src.depth > dirs[d.build_source].depth) d.build_source = src.id;
    }
  }
  // Sources are strictly shallower, so a cycle means a bug above.
  for (const auto& d : dirs) {
    int steps = 0;
    for (int cur = d.build_source; cur >= 0; cur = dirs[cur].build_source)
      if (++steps > static_cast<int>(dirs.size())) throw PlanError("cycle in auxiliary build sources");
  }
  return dirs;
}

namespace detail {

inline std::string operand_text(const Operand& o) {
  switch (o.kind) {
    case Operand::Kind::kAdjacency: return "N(u" + std::to_string(o.position) + ")";
    case Operand::Kind::kSlot: return "slot:" + std::to_string(o.ref);
    case Operand::Kind::kAux: return "aux:" + std::to_string(o.ref) + "(u" + std::to_string(o.position) + ")";
  }
  return "?";
}

inline std::vector<int> positions_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int p = 0; mask; ++p, mask >>= 1)
    if (mask & 1u) out.push_back(p);
  return out;
}

}  // namespace detail

/// Structural checks on a compiled plan. Throws PlanError on the first violation.
inline void validate_plan(const QueryPlan& plan) {
  const int n = plan.size();
  auto fail = [](const std::string& m) { throw PlanError("invalid plan: " + m); };
  const auto& slots = plan.slots;
  auto available = [&](int slot_id, int depth) {
    return slot_id >= 0 && slot_id < static_cast<int>(slots.size()) && slots[slot_id].depth <= depth;
  };
  for (const auto& s : slots) {
    if (s.depth < 1 || s.depth > s.target || s.target >= n) fail("slot depth/target out of range");
    if (!s.computes()) {
      if (!available(s.alias_of, s.depth) || !slots[s.alias_of].computes()) fail("bad alias");
      continue;
    }
    if ((s.bound_positions & ~detail::below(s.depth)) != 0) fail("bound on an unmatched position");
    auto check = [&](const Operand& o) {
      switch (o.kind) {
        case Operand::Kind::kAdjacency:
          if (o.position < 0 || o.position >= s.depth) fail("adjacency operand not matched yet");
          break;
        case Operand::Kind::kSlot:
          if (!available(o.ref, s.depth - 1) || !slots[o.ref].computes()) fail("slot operand unavailable");
          break;
        case Operand::Kind::kAux: {
          if (o.ref < 0 || o.ref >= static_cast<int>(plan.directives.size())) fail("unknown directive");
          const auto& d = plan.directives[o.ref];
          if (d.depth > s.depth - 2) fail("auxiliary graph built too late for its use");
          if (o.position != s.depth - 1) fail("auxiliary lookup must use the newest vertex");
          break;
        }
      }
    };
    check(s.base);
    for (const auto& st : s.steps) check(st.operand);
  }
  for (const auto& d : plan.directives) {
    if (!available(d.selecting_slot, d.depth) || !available(d.filtering_slot, d.depth))
      fail("directive sets not materialized at its depth");
    if (d.build_source >= 0 && plan.directives[d.build_source].depth >= d.depth)
      fail("build source not shallower");
    for (const auto& u : d.uses)
      if (d.depth > u.depth - 2) fail("directive depth must be <= use depth - 2");
  }
  if (static_cast<int>(plan.loops.size()) != n) fail("loop count");
  for (int d = 1; d < n; ++d) {
    const int cand = plan.table[d][d];
    if (cand < 0 || slots[cand].storage() != plan.loops[d].candidate_slot)
      fail("candidate slot missing at depth " + std::to_string(d));
  }
}

/// Compiles a schedule into an executable plan. Strategy kNone keeps only the
/// prefix sets; kEager and kOnline add auxiliary graphs gated always or by
/// the online cost model.
inline QueryPlan compile_plan(const QueryGraph& q, const Schedule& s, Strategy strategy) {
  const detail::PositionGraph pg(q, s);
  const int n = s.size();
  QueryPlan plan;
  plan.query = q;
  plan.schedule = s;
  plan.variant = s.variant;
  plan.strategy = strategy;
  plan.slots = plan_prefix_sets(q, s);
  plan.table = slot_table(plan.slots);
  auto& slots = plan.slots;

  if (strategy != Strategy::kNone) {
    auto dirs = dedup_aux_graphs(find_aux_graphs(q, s, slots), slots);

    // Each use site keeps only its deepest directive (most selective filter).
    for (auto& d : dirs) {
      std::erase_if(d.uses, [&](const UseSite& u) {
        for (const auto& other : dirs)
          if (other.depth > d.depth && std::find(other.uses.begin(), other.uses.end(), u) != other.uses.end())
            return true;
        return false;
      });
    }
    for (auto& d : dirs) {
      d.self_bound = !d.uses.empty() && std::all_of(d.uses.begin(), d.uses.end(), [&](const UseSite& u) {
        return pg.less[u.target][u.depth - 1];
      });
      d.gate = strategy == Strategy::kEager ? Gate::kAlways : Gate::kCostModel;
    }
    dirs = link_reuse_chains(std::move(dirs), slots);

    // Keep directives with uses plus everything on their build chains.
    std::vector<bool> keep(dirs.size(), false);
    for (const auto& d : dirs)
      if (!d.uses.empty())
        for (int cur = d.id; cur >= 0 && !keep[cur]; cur = dirs[cur].build_source) keep[cur] = true;
    std::vector<int> remap(dirs.size(), -1);
    for (const auto& d : dirs)
      if (keep[d.id]) {
        remap[d.id] = static_cast<int>(plan.directives.size());
        plan.directives.push_back(d);
      }
    for (auto& d : plan.directives) {
      d.id = remap[d.id];
      if (d.build_source >= 0) d.build_source = remap[d.build_source];
      for (const auto& u : d.uses) {
        auto& st = slots[u.slot].steps.at(0);
        if (st.operand.kind != Operand::Kind::kAdjacency || st.operand.position != u.depth - 1)
          throw PlanError("use site does not read N(u_k)");
        st.operand = Operand::aux(d.id, u.depth - 1);
      }
    }
  }

  plan.loops.resize(n);
  for (int depth = 0; depth < n; ++depth) {
    auto& lp = plan.loops[depth];
    lp.depth = depth;
    for (const auto& sl : slots)
      if (sl.depth == depth && sl.computes()) lp.compute_slots.push_back(sl.id);
    for (const auto& d : plan.directives)
      if (d.depth == depth) lp.build_aux.push_back(d.id);
    if (depth > 0) {
      const int cand = plan.table[depth][depth];
      if (cand < 0) throw PlanError("no candidate set for position " + std::to_string(depth));
      lp.candidate_slot = slots[cand].storage();
    }
    lp.upper_bounds = pg.upper_bounds(depth) & detail::below(depth);
    lp.lower_bounds = pg.lower_bounds(depth) & detail::below(depth);
    // Intersected neighbours can never equal u_p; everything else needs a check.
    lp.distinct_from = ~pg.adj[depth] & detail::below(depth);
  }
  validate_plan(plan);
  return plan;
}

inline nlohmann::ordered_json to_json(const QueryPlan& plan) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["variant"] = to_string(plan.variant);
  j["strategy"] = to_string(plan.strategy);
  j["schedule"] = to_json(plan.query, plan.schedule);
  auto& js = j["slots"] = ordered_json::array();
  for (const auto& s : plan.slots) {
    ordered_json o;
    o["id"] = s.id;
    o["target"] = s.target;
    o["depth"] = s.depth;
    if (!s.computes()) {
      o["alias_of"] = s.alias_of;
    } else {
      o["base"] = detail::operand_text(s.base);
      auto& st = o["steps"] = ordered_json::array();
      for (const auto& x : s.steps)
        st.push_back({{"op", x.op == SetOp::kIntersect ? "intersect" : "subtract"},
                      {"operand", detail::operand_text(x.operand)}});
      o["bound"] = detail::positions_of(s.bound_positions);
    }
    js.push_back(o);
  }
  auto& jd = j["directives"] = ordered_json::array();
  auto& reuse = j["reuse_edges"] = ordered_json::array();
  for (const auto& d : plan.directives) {
    ordered_json o;
    o["id"] = d.id;
    o["depth"] = d.depth;
    o["selecting_slot"] = d.selecting_slot;
    o["filtering_slot"] = d.filtering_slot;
    auto& uses = o["uses"] = ordered_json::array();
    for (const auto& u : d.uses) uses.push_back({{"depth", u.depth}, {"target", u.target}, {"slot", u.slot}});
    o["build_source"] = d.build_source;
    o["self_bound"] = d.self_bound;
    o["gate"] = d.gate == Gate::kAlways ? "always" : "cost-model";
    jd.push_back(o);
    if (d.build_source >= 0) reuse.push_back({d.build_source, d.id});
  }
  auto& jl = j["loops"] = ordered_json::array();
  for (const auto& lp : plan.loops) {
    ordered_json o;
    o["depth"] = lp.depth;
    o["compute_slots"] = lp.compute_slots;
    o["build_aux"] = lp.build_aux;
    o["candidate_slot"] = lp.candidate_slot;
    o["upper_bounds"] = detail::positions_of(lp.upper_bounds);
    o["lower_bounds"] = detail::positions_of(lp.lower_bounds);
    jl.push_back(o);
  }
  return j;
}

}  // namespace sgm
