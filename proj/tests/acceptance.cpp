// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <string>

#include "sgm/oracle.hpp"
#include "sgm/sgm.hpp"
#include "test_util.hpp"

namespace {

using namespace sgm;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

QueryPlan plan_of(const QueryGraph& q, Variant v, Strategy s) {
  return compile_plan(q, dual_sort_schedule(q, v), s);
}

std::uint64_t count(const QueryPlan& plan, const CsrGraph& g, ExecConfig cfg = {}) {
  MatchSink sink;
  return execute_parallel(plan, g, sink, cfg).match_count;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  const double ps[] = {0.2, 0.5, 0.8};
  int cases = 0, runs = 0, bad = 0;
  for (; cases < 200; ++cases) {
    const auto q = testing::random_query(rng, 3 + static_cast<int>(rng() % 4));
    const auto g = erdos_renyi(4 + rng() % 9, ps[rng() % 3], rng());
    for (auto v : {Variant::kEdgeInduced, Variant::kVertexInduced}) {
      const auto want = oracle::count_unique(q, g, v);
      for (auto st : {Strategy::kNone, Strategy::kEager, Strategy::kOnline}) {
        const auto plan = plan_of(q, v, st);
        for (int w : {1, 4}) {
          ExecConfig cfg;
          cfg.workers = w;
          ++runs;
          bad += count(plan, g, cfg) != want;
        }
      }
    }
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 60.0, fmt("%d cases, %d runs, %d mismatches, %.2fs (limit 60s)", cases, runs, bad, t)};
}

Outcome kernel_pruning() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  int bad = 0;
  const int instances = 10000;
  for (int it = 0; it < instances; ++it) {
    const VertexId universe = 8 + static_cast<VertexId>(rng() % 400);
    const auto outer = testing::random_set(rng, universe, 0.1 + (rng() % 8) / 10.0);
    VertexSet c;
    std::bernoulli_distribution keep(0.5);
    for (auto v : outer)
      if (keep(rng)) c.push_back(v);
    const auto n = testing::random_set(rng, universe, (rng() % 10) / 10.0);
    const auto pruned = intersect(outer, n);
    const VertexId bound = it % 2 ? kNoBound : static_cast<VertexId>(rng() % (universe + 2));
    bad += intersect(c, pruned, bound) != intersect(c, n, bound);
    bad += subtract(c, pruned, bound) != subtract(c, n, bound);
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 5.0,
          fmt("%d instances x {intersect, subtract}, half bounded, %d failures, %.2fs (limit 5s)", instances, bad, t)};
}

Outcome closed_form_counts() {
  int bad = 0, checks = 0;
  for (std::uint64_t n = 4; n <= 9; ++n) {
    const auto g = complete_graph(n);
    for (auto st : {Strategy::kNone, Strategy::kEager, Strategy::kOnline}) {
      bad += count(plan_of(clique_query(3), Variant::kEdgeInduced, st), g) != choose(n, 3);
      bad += count(plan_of(clique_query(4), Variant::kEdgeInduced, st), g) != choose(n, 4);
      checks += 2;
    }
  }
  std::mt19937_64 rng(1003);
  for (int it = 0; it < 10; ++it) {
    const auto g = erdos_renyi(30 + rng() % 200, 0.05 + (rng() % 30) / 100.0, rng());
    for (auto st : {Strategy::kNone, Strategy::kEager, Strategy::kOnline}) {
      bad += count(plan_of(path_query(2), Variant::kEdgeInduced, st), g) != g.edge_count();
      ++checks;
    }
  }
  return {bad == 0, fmt("%d exact checks (K_n triangles and 4-cliques n=4..9, edge query on 10 graphs), %d wrong",
                        checks, bad)};
}

Outcome statistics_formulas() {
  const auto s = graph_stats(complete_graph(4));
  const double p1 = 2.0 * 6 / (4.0 * 4), p2 = 4.0 * 4 / (12.0 * 12);
  const bool formulas = std::abs(s.p1 - p1) <= 1e-12 && std::abs(s.p2 - p2) <= 1e-12;
  std::mt19937_64 rng(1004);
  int bad = 0;
  for (int it = 0; it < 20; ++it) {
    const auto g = erdos_renyi(5 + rng() % 46, 0.05 + (rng() % 60) / 100.0, rng());
    std::uint64_t brute = 0;
    const auto nv = static_cast<VertexId>(g.vertex_count());
    for (VertexId a = 0; a < nv; ++a)
      for (VertexId b = a + 1; b < nv; ++b)
        for (VertexId c = b + 1; c < nv; ++c) brute += g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c);
    bad += brute != triangle_count(g);
  }
  return {formulas && bad == 0,
          fmt("p1(K4)=%.15f (want %.15f), p2(K4)=%.15f (want %.15f), triangle mismatches on 20 graphs: %d", s.p1, p1,
              s.p2, p2, bad)};
}

Outcome plan_shapes() {
  std::ifstream in(std::string(SGM_GOLDEN_DIR) + "/clique4_eager.json");
  if (!in) return {false, "golden file missing"};
  const auto want = nlohmann::ordered_json::parse(in);
  const auto plan = plan_of(clique_query(4), Variant::kEdgeInduced, Strategy::kEager);
  const bool golden = to_json(plan) == want;
  const bool one_depth1 = plan.directives.size() == 1 && plan.directives[0].depth == 1;
  std::size_t tri = 0, path = 0;
  for (auto v : {Variant::kEdgeInduced, Variant::kVertexInduced})
    for (auto st : {Strategy::kEager, Strategy::kOnline}) {
      tri += plan_of(clique_query(3), v, st).directives.size();
      path += plan_of(path_query(4), v, st).directives.size();
    }
  return {golden && one_depth1 && tri == 0 && path == 0,
          fmt("4-clique plan %s golden, %zu directive(s) at depth %d; triangle directives %zu, path directives %zu",
              golden ? "matches" : "differs from", plan.directives.size(),
              plan.directives.empty() ? -1 : plan.directives[0].depth, tri, path)};
}

Outcome reuse_chain_equality() {
  const auto g = erdos_renyi(200, 0.3, 1006);
  const auto plan = plan_of(clique_query(5), Variant::kEdgeInduced, Strategy::kEager);
  ExecConfig cfg;
  cfg.verify_chains = true;
  MatchSink sink;
  const auto rs = execute(plan, g, sink, cfg);
  return {rs.chain_checks >= 1000 && rs.chain_mismatches == 0,
          fmt("%llu chained frames compared against direct builds, %llu mismatches (need >= 1000 frames)",
              static_cast<unsigned long long>(rs.chain_checks),
              static_cast<unsigned long long>(rs.chain_mismatches))};
}

struct PowerLawRuns {
  CsrGraph g;
  RunStats none, eager, online;
};

const PowerLawRuns& power_law_runs() {
  static const PowerLawRuns runs = [] {
    PowerLawRuns r;
    r.g = power_law(20000, 8, 1007);
    auto go = [&](Strategy st) {
      MatchSink sink;
      return execute(plan_of(clique_query(4), Variant::kEdgeInduced, st), r.g, sink);
    };
    r.none = go(Strategy::kNone);
    r.eager = go(Strategy::kEager);
    r.online = go(Strategy::kOnline);
    return r;
  }();
  return runs;
}

Outcome scanned_reduction() {
  const auto& r = power_law_runs();
  const int deepest = 3;
  const auto& dn = r.none.per_depth[deepest];
  const auto& de = r.eager.per_depth[deepest];
  const auto eager_scans = de.scanned_adjacency + de.scanned_pruned;
  const auto worst = std::max(r.none.comparisons, r.eager.comparisons);
  const bool same = r.none.match_count == r.eager.match_count && r.none.match_count == r.online.match_count;
  return {same && eager_scans < dn.scanned_adjacency && r.online.comparisons <= worst,
          fmt("deepest loop: eager adjacency+pruned %llu < none adjacency %llu; comparisons none %llu, eager %llu, "
              "online %llu; %llu matches",
              static_cast<unsigned long long>(eager_scans), static_cast<unsigned long long>(dn.scanned_adjacency),
              static_cast<unsigned long long>(r.none.comparisons), static_cast<unsigned long long>(r.eager.comparisons),
              static_cast<unsigned long long>(r.online.comparisons),
              static_cast<unsigned long long>(r.none.match_count))};
}

Outcome parallel_determinism() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1008);
  int bad = 0, runs = 0;
  for (int it = 0; it < 20; ++it) {
    const auto q = testing::random_query(rng, 3 + static_cast<int>(rng() % 3), 0.6);
    const auto g = it % 2 ? power_law(1500, 4, rng()) : erdos_renyi(150, 0.1, rng());
    const auto v = it % 3 ? Variant::kEdgeInduced : Variant::kVertexInduced;
    const auto plan = plan_of(q, v, it % 2 ? Strategy::kOnline : Strategy::kEager);
    const auto want = count(plan, g);
    for (int w : {1, 2, 4, 8})
      for (bool nested : {false, true}) {
        ExecConfig cfg;
        cfg.workers = w;
        cfg.nested = nested;
        cfg.nested_threshold = 32;
        ++runs;
        bad += count(plan, g, cfg) != want;
      }
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 30.0,
          fmt("20 cases x workers {1,2,4,8} x nested {off,on}: %d runs, %d disagreements, %.2fs (limit 30s)", runs,
              bad, t)};
}

Outcome memory_accounting() {
  const auto& r = power_law_runs();
  const double csr = static_cast<double>(r.g.csr_bytes());
  const double eager = static_cast<double>(r.eager.aux_bytes_peak_per_worker);
  const double online = static_cast<double>(r.online.aux_bytes_peak_per_worker);
  const double worst = std::max(eager, online);
  return {worst > 0 && worst < 0.25 * csr,
          fmt("aux peak per worker: eager %.0f B, online %.0f B; CSR %.0f B; ratio %.4f (limit 0.25)", eager, online,
              csr, worst / csr)};
}

Outcome planner_complexity() {
  std::vector<double> ms;
  for (int n = 3; n <= 8; ++n) {
    const auto q = clique_query(n);
    double best = 1e9;
    for (int rep = 0; rep < 15; ++rep) {
      const auto t0 = Clock::now();
      const auto plan = compile_plan(q, dual_sort_schedule(q), Strategy::kOnline);
      best = std::min(best, seconds_since(t0) * 1e3);
      if (plan.size() != n) return {false, "bad plan"};
    }
    ms.push_back(best);
  }
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    ok = ok && ms[i] < 50.0;
    if (i > 0) ok = ok && ms[i] <= 10.0 * std::max(ms[i - 1], 0.001);
    detail += fmt("%sK%zu %.3fms", i ? ", " : "", i + 3, ms[i]);
  }
  double worst_ratio = 0;
  for (std::size_t i = 1; i < ms.size(); ++i) worst_ratio = std::max(worst_ratio, ms[i] / std::max(ms[i - 1], 0.001));
  return {ok, detail + fmt("; max successive ratio %.2f (limit 10, each < 50ms)", worst_ratio)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"oracle equivalence", oracle_equivalence},
      {"kernel pruning", kernel_pruning},
      {"closed-form counts", closed_form_counts},
      {"statistics formulas", statistics_formulas},
      {"plan-shape golden", plan_shapes},
      {"reuse-chain equality", reuse_chain_equality},
      {"scanned-vertex reduction", scanned_reduction},
      {"parallel determinism", parallel_determinism},
      {"memory accounting", memory_accounting},
      {"planner complexity", planner_complexity},
  };
  int failed = 0, id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", id - failed, id);
  return failed ? 1 : 0;
}
