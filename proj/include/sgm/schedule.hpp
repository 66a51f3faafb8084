#pragma once

// Query scheduling: matching order selection and symmetry-breaking
// restrictions.
//
// Positions are 0-based throughout: order[p] is the query vertex matched at
// loop depth p+1, and u_p denotes the data vertex bound to that position.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "json.hpp"
#include "sgm/common.hpp"
#include "sgm/query_graph.hpp"

namespace sgm {

/// u_smaller < u_larger must hold between the data vertices at two positions.
struct Restriction {
  int smaller;
  int larger;
  auto operator<=>(const Restriction&) const = default;
};

using RestrictionSet = std::vector<Restriction>;
using Permutation = std::array<int, kMaxQueryVertices>;

struct Schedule {
  std::vector<int> order;  // query vertex per position
  RestrictionSet restrictions;
  Variant variant = Variant::kEdgeInduced;

  int size() const { return static_cast<int>(order.size()); }
};

/// Positions j < pos whose query vertex is adjacent to order[pos].
inline std::vector<int> backward_neighbors(const QueryGraph& q, const std::vector<int>& order, int pos) {
  std::vector<int> out;
  for (int j = 0; j < pos; ++j)
    if (q.adjacent(order[j], order[pos])) out.push_back(j);
  return out;
}

/// Score(v_i) = sum over backward neighbours at position j of 2^(n-1-j)
/// (positions are 0-based, so this is 2^(|V(q)|-j) in 1-based terms).
inline std::vector<std::uint64_t> vertex_scores(const QueryGraph& q, const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  std::vector<std::uint64_t> s(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j : backward_neighbors(q, order, i)) s[i] += std::uint64_t{1} << (n - 1 - j);
  return s;
}

inline bool is_connected_order(const QueryGraph& q, const std::vector<int>& order) {
  std::uint32_t seen = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && (q.mask(order[i]) & seen) == 0) return false;
    seen |= 1u << order[i];
  }
  return true;
}

/// All adjacency-preserving permutations of the query vertices. Backtracks
/// over partial maps, so only consistent prefixes are extended.
inline std::vector<Permutation> automorphisms(const QueryGraph& q) {
  const int n = q.size();
  std::vector<Permutation> out;
  Permutation p{};
  auto rec = [&](auto&& self, int a, std::uint32_t used) -> void {
    if (a == n) {
      out.push_back(p);
      return;
    }
    for (int x = 0; x < n; ++x) {
      if ((used >> x) & 1u || q.degree(x) != q.degree(a)) continue;
      bool ok = true;
      for (int b = 0; b < a && ok; ++b) ok = q.adjacent(a, b) == q.adjacent(x, p[b]);
      if (!ok) continue;
      p[a] = x;
      self(self, a + 1, used | (1u << x));
    }
  };
  rec(rec, 0, 0);
  return out;
}

/// Whether some automorphism maps a to b while fixing every vertex in `fixed`.
inline bool maps_to(const QueryGraph& q, std::uint32_t fixed, int a, int b) {
  const int n = q.size();
  if (q.degree(a) != q.degree(b)) return false;
  std::array<int, kMaxQueryVertices> want{};
  want.fill(-1);
  for (int f = 0; f < n; ++f)
    if ((fixed >> f) & 1u) want[f] = f;
  if (want[a] >= 0 && want[a] != b) return false;
  want[a] = b;
  Permutation p{};
  auto rec = [&](auto&& self, int v, std::uint32_t used) -> bool {
    if (v == n) return true;
    for (int x = 0; x < n; ++x) {
      if ((used >> x) & 1u || (want[v] >= 0 && want[v] != x) || q.degree(x) != q.degree(v)) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) ok = q.adjacent(v, u) == q.adjacent(x, p[u]);
      if (!ok) continue;
      p[v] = x;
      if (self(self, v + 1, used | (1u << x))) return true;
    }
    return false;
  };
  return rec(rec, 0, 0);
}

/// The automorphism group re-expressed on positions of the given order.
inline std::vector<Permutation> position_automorphisms(const QueryGraph& q, const std::vector<int>& order) {
  const int n = q.size();
  std::array<int, kMaxQueryVertices> pos_of{};
  for (int p = 0; p < n; ++p) pos_of[order[p]] = p;
  std::vector<Permutation> out;
  for (const auto& g : automorphisms(q)) {
    Permutation h{};
    for (int p = 0; p < n; ++p) h[p] = pos_of[g[order[p]]];
    out.push_back(h);
  }
  return out;
}

using OrderMatrix = std::array<std::array<bool, kMaxQueryVertices>, kMaxQueryVertices>;

/// less[a][b] is true when the restrictions imply u_a < u_b.
inline OrderMatrix restriction_closure(int n, const RestrictionSet& rs) {
  OrderMatrix less{};
  for (auto r : rs) less[r.smaller][r.larger] = true;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (less[a][k] && less[k][b]) less[a][b] = true;
  return less;
}

inline RestrictionSet transitive_reduction(int n, const RestrictionSet& rs) {
  const auto less = restriction_closure(n, rs);
  RestrictionSet out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!less[a][b]) continue;
      bool implied = false;
      for (int c = 0; c < n && !implied; ++c) implied = c != a && c != b && less[a][c] && less[c][b];
      if (!implied) out.push_back({a, b});
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Stabilizer-chain symmetry breaking: walking positions in `base` order,
/// the position must hold the largest (or smallest) id of its orbit under
/// the automorphisms fixing every earlier base position. Orbits are found by
/// searching for one witness per pair, so the group is never materialized.
inline RestrictionSet stabilizer_chain_restrictions(const QueryGraph& q, const std::vector<int>& order,
                                                    const std::vector<int>& base, bool base_is_larger) {
  const int n = q.size();
  RestrictionSet rs;
  std::uint32_t fixed = 0;
  for (int p : base) {
    for (int other = 0; other < n; ++other) {
      if (other == p || ((fixed >> order[other]) & 1u)) continue;
      if (!maps_to(q, fixed, order[p], order[other])) continue;
      rs.push_back(base_is_larger ? Restriction{other, p} : Restriction{p, other});
    }
    fixed |= 1u << order[p];
  }
  return transitive_reduction(n, rs);
}

/// Alternative restriction sets for a fixed matching order; each keeps
/// exactly one representative per automorphism class of matches.
inline std::vector<RestrictionSet> generate_restrictions(const QueryGraph& q, const std::vector<int>& order) {
  const int n = q.size();
  std::vector<std::vector<int>> bases;
  std::vector<int> base(n);
  std::iota(base.begin(), base.end(), 0);
  for (int r = 0; r < n; ++r) {
    bases.push_back(base);
    std::rotate(base.begin(), base.begin() + 1, base.end());
  }
  std::reverse(base.begin(), base.end());
  bases.push_back(base);

  std::vector<RestrictionSet> out;
  for (const auto& b : bases)
    for (bool larger : {true, false}) {
      auto rs = stabilizer_chain_restrictions(q, order, b, larger);
      if (std::find(out.begin(), out.end(), rs) == out.end()) out.push_back(std::move(rs));
    }
  return out;
}

/// The vertex score applied to the undirected graph formed by the checks.
inline std::vector<std::uint64_t> restriction_scores(int n, const RestrictionSet& rs) {
  std::vector<std::uint64_t> s(n, 0);
  std::set<std::pair<int, int>> edges;
  for (auto r : rs) edges.insert(std::minmax(r.smaller, r.larger));
  for (auto [j, i] : edges) s[i] += std::uint64_t{1} << (n - 1 - j);
  return s;
}

/// Picks the best restriction set: most checks that act as upper bounds
/// (later position smaller, so bounded ops stop early), then highest score
/// vector, then fewest checks.
inline RestrictionSet rank_restriction_sets(int n, const std::vector<RestrictionSet>& sets) {
  auto upper_bounds = [](const RestrictionSet& rs) {
    return std::count_if(rs.begin(), rs.end(), [](Restriction r) { return r.smaller > r.larger; });
  };
  const RestrictionSet* best = nullptr;
  for (const auto& rs : sets) {
    if (!best) {
      best = &rs;
      continue;
    }
    auto ua = upper_bounds(rs), ub = upper_bounds(*best);
    if (ua != ub) {
      if (ua > ub) best = &rs;
      continue;
    }
    auto sa = restriction_scores(n, rs), sb = restriction_scores(n, *best);
    if (sa != sb) {
      if (sa > sb) best = &rs;
      continue;
    }
    if (rs.size() != best->size()) {
      if (rs.size() < best->size()) best = &rs;
      continue;
    }
    if (rs < *best) best = &rs;
  }
  return best ? *best : RestrictionSet{};
}

/// Ranks connected orderings lexicographically by their per-position scores
/// (highest first, ties to the lexicographically smallest vertex sequence),
/// then ranks the restriction sets of the winner. The search is level by
/// level: a prefix survives only while its scores tie the best so far, and
/// among candidates that are symmetric given the prefix only the smallest is
/// expanded (its best completion is never beaten by a symmetric one).
inline Schedule dual_sort_schedule(const QueryGraph& q, Variant variant = Variant::kEdgeInduced) {
  const int n = q.size();
  struct Prefix {
    std::vector<int> order;
    std::uint32_t used = 0;
  };
  std::vector<Prefix> level{Prefix{}};
  for (int i = 0; i < n; ++i) {
    std::vector<Prefix> next;
    std::uint64_t best = 0;
    for (const auto& pre : level) {
      std::vector<int> reps;
      for (int x = 0; x < n; ++x) {
        if ((pre.used >> x) & 1u) continue;
        if (i > 0 && (q.mask(x) & pre.used) == 0) continue;
        std::uint64_t score = 0;
        for (int j = 0; j < i; ++j)
          if (q.adjacent(pre.order[j], x)) score |= std::uint64_t{1} << (n - 1 - j);
        if (!next.empty() && score < best) continue;
        bool symmetric = false;
        for (int r : reps) symmetric = symmetric || maps_to(q, pre.used, r, x);
        if (symmetric) continue;
        reps.push_back(x);
        if (next.empty() || score > best) {
          next.clear();
          best = score;
        }
        Prefix ext = pre;
        ext.order.push_back(x);
        ext.used |= 1u << x;
        next.push_back(std::move(ext));
      }
    }
    level = std::move(next);
  }
  std::vector<int> best = level.front().order;
  for (const auto& pre : level) best = std::min(best, pre.order);

  Schedule sched;
  sched.order = best;
  sched.restrictions = rank_restriction_sets(n, generate_restrictions(q, best));
  sched.variant = variant;
  return sched;
}

inline nlohmann::ordered_json to_json(const QueryGraph& q, const Schedule& s) {
  nlohmann::ordered_json j;
  j["order"] = s.order;
  auto& r = j["restrictions"] = nlohmann::ordered_json::array();
  for (auto x : s.restrictions) r.push_back({{"smaller", x.smaller}, {"larger", x.larger}});
  j["scores"] = vertex_scores(q, s.order);
  j["restriction_scores"] = restriction_scores(s.size(), s.restrictions);
  return j;
}

}  // namespace sgm
