#include <gtest/gtest.h>

#include <map>

#include "sgm/oracle.hpp"
#include "test_util.hpp"

namespace sgm {
namespace {

using testing::plan_for;
using testing::run_count;

constexpr Strategy kStrategies[] = {Strategy::kNone, Strategy::kEager, Strategy::kOnline};
constexpr Variant kVariants[] = {Variant::kEdgeInduced, Variant::kVertexInduced};

std::multiset<std::vector<VertexId>> collect(const QueryPlan& plan, const CsrGraph& g, ExecConfig cfg = {}) {
  MatchSink sink(MatchSink::Mode::kCollect);
  execute_parallel(plan, g, sink, cfg);
  std::multiset<std::vector<VertexId>> out;
  for (const auto& m : sink.matches()) out.insert(to_query_order(plan, m));
  return out;
}

TEST(Engine, ClosedFormCounts) {
  for (auto st : kStrategies) {
    EXPECT_EQ(run_count(plan_for(clique_query(3), Variant::kEdgeInduced, st), complete_graph(4)), 4u);
    EXPECT_EQ(run_count(plan_for(clique_query(4), Variant::kEdgeInduced, st), complete_graph(5)), 5u);
  }
}

TEST(Engine, MatchesOracleOnRandomCases) {
  std::mt19937_64 rng(61);
  const double ps[] = {0.2, 0.5, 0.8};
  for (int it = 0; it < 60; ++it) {
    const auto q = testing::random_query(rng, 3 + static_cast<int>(rng() % 4));
    const auto g = erdos_renyi(6 + rng() % 7, ps[rng() % 3], rng());
    for (auto v : kVariants) {
      const auto want = oracle::count_unique(q, g, v);
      for (auto st : kStrategies) {
        ExecConfig cfg;
        cfg.check_invariants = true;
        ASSERT_EQ(run_count(plan_for(q, v, st), g, cfg), want) << q.bitstring() << " " << to_string(v);
      }
    }
  }
}

TEST(Engine, MatchesAreValidAndDistinct) {
  std::mt19937_64 rng(62);
  for (int it = 0; it < 30; ++it) {
    const auto q = testing::random_query(rng, 3 + static_cast<int>(rng() % 3));
    const auto g = erdos_renyi(10, 0.5, rng());
    for (auto v : kVariants) {
      const auto plan = plan_for(q, v, Strategy::kEager);
      const auto got = collect(plan, g);
      std::set<std::vector<VertexId>> unique_sets;
      for (const auto& m : got) {
        for (int a = 0; a < q.size(); ++a)
          for (int b = a + 1; b < q.size(); ++b) {
            ASSERT_NE(m[a], m[b]);
            if (q.adjacent(a, b)) {
              ASSERT_TRUE(g.has_edge(m[a], m[b]));
            }
            if (v == Variant::kVertexInduced && !q.adjacent(a, b)) {
              ASSERT_FALSE(g.has_edge(m[a], m[b]));
            }
          }
      }
      EXPECT_EQ(got.size(), oracle::count_unique(q, g, v));
    }
  }
}

TEST(Engine, StrategyInvarianceOfMatchMultiset) {
  std::mt19937_64 rng(63);
  for (int it = 0; it < 25; ++it) {
    const auto q = testing::random_query(rng, 4 + static_cast<int>(rng() % 3), 0.6);
    const auto g = erdos_renyi(25, 0.4, rng());
    for (auto v : kVariants) {
      const auto base = collect(plan_for(q, v, Strategy::kNone), g);
      for (auto st : {Strategy::kEager, Strategy::kOnline})
        for (int workers : {1, 3}) {
          ExecConfig cfg;
          cfg.workers = workers;
          cfg.nested = workers > 1;
          cfg.nested_threshold = 2;
          cfg.high_degree_threshold = 8;
          ASSERT_EQ(collect(plan_for(q, v, st), g, cfg), base);
        }
    }
  }
}

TEST(Engine, CounterSoundness) {
  const auto g = power_law(800, 5, 3);
  for (auto q : {clique_query(4), clique_query(5), testing::cycle_query(5)})
    for (auto v : kVariants)
      for (auto st : kStrategies) {
        ExecConfig cfg;
        cfg.high_degree_threshold = 16;
        MatchSink sink;
        const auto rs = execute(plan_for(q, v, st), g, sink, cfg);
        EXPECT_EQ(rs.scanned_total(), rs.scanned_shadow);
        std::uint64_t by_depth = 0, by_degree = 0;
        for (const auto& d : rs.per_depth) by_depth += d.scanned_adjacency + d.scanned_prefix + d.scanned_pruned;
        for (auto b : rs.scanned_by_degree) by_degree += b;
        EXPECT_EQ(by_depth, rs.scanned_total());
        EXPECT_EQ(by_degree, rs.scanned_adjacency + rs.scanned_pruned);
        if (st == Strategy::kNone) {
          EXPECT_EQ(rs.scanned_pruned, 0u);
        }
      }
}

TEST(Engine, ChainedBuildsEqualDirectBuilds) {
  const auto g = erdos_renyi(60, 0.4, 5);
  ExecConfig cfg;
  cfg.verify_chains = true;
  cfg.check_invariants = true;
  MatchSink sink;
  const auto rs = execute(plan_for(clique_query(5), Variant::kEdgeInduced, Strategy::kEager), g, sink, cfg);
  EXPECT_GT(rs.chain_checks, 0u);
  EXPECT_EQ(rs.chain_mismatches, 0u);
}

TEST(Engine, EagerPrunesDeepestLoopScans) {
  const auto g = power_law(3000, 6, 7);
  MatchSink a, b;
  const auto none = execute(plan_for(clique_query(4), Variant::kEdgeInduced, Strategy::kNone), g, a);
  const auto eager = execute(plan_for(clique_query(4), Variant::kEdgeInduced, Strategy::kEager), g, b);
  EXPECT_EQ(none.match_count, eager.match_count);
  const auto& dn = none.per_depth[3];
  const auto& de = eager.per_depth[3];
  EXPECT_LT(de.scanned_adjacency + de.scanned_pruned, dn.scanned_adjacency);
  EXPECT_GT(eager.aux_graphs_built, 0u);
}

TEST(Engine, OnlineLazyAndDeferredPaths) {
  const auto g = power_law(2000, 6, 9);
  const auto plan = plan_for(clique_query(4), Variant::kEdgeInduced, Strategy::kOnline);
  const auto want = run_count(plan_for(clique_query(4), Variant::kEdgeInduced, Strategy::kNone), g);
  for (std::size_t thr : {std::size_t{1}, std::size_t{10}, std::size_t{1} << 30}) {
    ExecConfig cfg;
    cfg.high_degree_threshold = thr;
    cfg.check_invariants = true;
    MatchSink sink;
    const auto rs = execute(plan, g, sink, cfg);
    EXPECT_EQ(rs.match_count, want);
    if (thr == 1) {
      EXPECT_EQ(rs.lists_pruned, 0u);
      EXPECT_GT(rs.lists_lazily_pruned, 0u);
      EXPECT_LE(rs.lists_lazily_pruned, rs.lists_lazy);
    }
  }
}

TEST(Engine, WorkersAndNestingAgree) {
  std::mt19937_64 rng(64);
  const auto g = power_law(1500, 5, 11);
  for (auto q : {clique_query(4), testing::cycle_query(4), testing::star_query(3)}) {
    const auto plan = plan_for(q, Variant::kEdgeInduced, Strategy::kOnline);
    const auto want = run_count(plan, g);
    for (int workers : {1, 2, 4, 8})
      for (bool nested : {false, true}) {
        ExecConfig cfg;
        cfg.workers = workers;
        cfg.nested = nested;
        cfg.nested_threshold = 16;
        ASSERT_EQ(run_count(plan, g, cfg), want);
      }
  }
}

TEST(Engine, SingleWorkerParallelEqualsSerialCounters) {
  const auto g = power_law(1000, 5, 13);
  const auto plan = plan_for(clique_query(4), Variant::kEdgeInduced, Strategy::kEager);
  MatchSink a, b;
  ExecConfig cfg;
  const auto s = execute(plan, g, a, cfg);
  const auto p = execute_parallel(plan, g, b, cfg);
  EXPECT_EQ(s.match_count, p.match_count);
  EXPECT_EQ(s.scanned_adjacency, p.scanned_adjacency);
  EXPECT_EQ(s.scanned_prefix, p.scanned_prefix);
  EXPECT_EQ(s.scanned_pruned, p.scanned_pruned);
  EXPECT_EQ(s.comparisons, p.comparisons);
  EXPECT_EQ(s.aux_bytes_peak_per_worker, p.aux_bytes_peak_per_worker);
}

TEST(Engine, NestedModeActuallySplitsWork) {
  // A star-heavy graph: one hub, with the largest id, adjacent to everything.
  std::vector<Edge> edges;
  for (std::uint64_t v = 0; v < 3000; ++v) edges.emplace_back(3000, v);
  for (std::uint64_t v = 0; v < 3000; v += 2) edges.emplace_back(v, v + 1);
  const auto g = build_csr(edges);
  const auto plan = plan_for(clique_query(3), Variant::kEdgeInduced, Strategy::kNone);
  ExecConfig cfg;
  cfg.workers = 4;
  cfg.nested = true;
  cfg.nested_threshold = 100;
  MatchSink sink;
  const auto rs = execute_parallel(plan, g, sink, cfg);
  EXPECT_EQ(rs.match_count, 1500u);
  EXPECT_GT(rs.nested_groups, 0u);
  EXPECT_GT(rs.nested_tasks, 1u);
}

TEST(Engine, UninstrumentedRunCountsOnly) {
  const auto g = erdos_renyi(40, 0.3, 2);
  const auto plan = plan_for(clique_query(4), Variant::kEdgeInduced, Strategy::kEager);
  ExecConfig cfg;
  cfg.instrumented = false;
  MatchSink sink;
  const auto rs = execute(plan, g, sink, cfg);
  EXPECT_EQ(rs.match_count, run_count(plan, g));
  EXPECT_EQ(rs.scanned_total(), 0u);
}

TEST(Engine, CollectCapAndEdgeQuery) {
  const auto path = build_csr({{0, 1}, {1, 2}});
  const auto plan = plan_for(path_query(2), Variant::kEdgeInduced, Strategy::kNone);
  MatchSink sink(MatchSink::Mode::kCollect);
  execute(plan, path, sink);
  EXPECT_EQ(sink.matches().size(), 2u);
  MatchSink tiny(MatchSink::Mode::kCollect, 1);
  EXPECT_THROW(execute(plan, path, tiny), EngineError);
  EXPECT_THROW(execute_parallel(plan, path, tiny, ExecConfig{.workers = 0}), EngineError);
}

TEST(Engine, StatsJsonIsVersioned) {
  MatchSink sink;
  const auto rs = execute(plan_for(clique_query(3), Variant::kEdgeInduced, Strategy::kNone), complete_graph(5), sink);
  const auto j = to_json(rs);
  EXPECT_EQ(j["stats_version"], 1);
  EXPECT_EQ(j["match_count"], 10);
  EXPECT_TRUE(j.contains("aux_bytes_peak_per_worker"));
  EXPECT_EQ(j["per_depth"].size(), rs.per_depth.size());
}

TEST(AuxGraph, PruningExampleFromFigure) {
  // Vertex a=0 with neighbours b=1, d=2, e=3 and extra structure around them.
  const auto g = build_csr({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {1, 4}, {3, 5}, {2, 6}});
  const auto na = g.adj(0);
  AuxDirective d;
  d.id = 0;
  AuxBuildRequest req;
  req.directive = &d;
  req.selecting = na;
  req.filtering = na;
  Arena arena;
  AuxBuildStats bs;
  const auto* inst = build_aux(req, g, arena, bs, [](const PruneScan&) {});
  ASSERT_EQ(inst->size(), 3u);
  EXPECT_EQ(bs.pruned, 3u);
  for (VertexId u : na) {
    const auto view = inst->lookup(u);
    EXPECT_TRUE(view.pruned);
    const auto want = intersect(na, g.adj(u));
    EXPECT_EQ(VertexSet(view.list.begin(), view.list.end()), want);
  }
  // Outside the index: N(u).
  EXPECT_FALSE(inst->lookup(4).pruned);
  EXPECT_EQ(inst->lookup(4).list.size(), g.degree(4));
}

TEST(AuxGraph, DeferredAndLazyEntries) {
  const auto g = complete_graph(8);
  const VertexSet selecting{1, 4, 7};
  const VertexSet filtering{0, 1, 2, 3};
  AuxDirective d;
  d.id = 0;
  AuxBuildRequest req;
  req.directive = &d;
  req.selecting = selecting;
  req.filtering = filtering;
  req.gate = Gate::kCostModel;
  req.extensions = 0.0;  // never worth pruning
  req.high_degree_threshold = 100;
  Arena arena;
  AuxBuildStats bs;
  const auto* all_deferred = build_aux(req, g, arena, bs, [](const PruneScan&) {});
  EXPECT_EQ(bs.deferred, 3u);
  for (VertexId u : selecting) EXPECT_FALSE(all_deferred->lookup(u).pruned);

  req.high_degree_threshold = 1;
  AuxBuildStats lazy_stats;
  int prunes = 0;
  auto count = [&](const PruneScan& ps) { prunes += ps.lazy; };
  const auto* lazy = build_aux(req, g, arena, lazy_stats, count);
  EXPECT_EQ(lazy_stats.lazy, 3u);
  EXPECT_EQ(prunes, 0);
  // First and last index positions: pruned on first use, cached afterwards.
  for (VertexId u : {VertexId{1}, VertexId{7}, VertexId{1}, VertexId{7}}) {
    const auto view = lazy->lookup(u, count);
    EXPECT_TRUE(view.pruned);
    EXPECT_EQ(VertexSet(view.list.begin(), view.list.end()), intersect(filtering, g.adj(u)));
  }
  EXPECT_EQ(prunes, 2);
  EXPECT_EQ(lazy->entry_status(1), EntryStatus::kLazy);
}

}  // namespace
}  // namespace sgm
