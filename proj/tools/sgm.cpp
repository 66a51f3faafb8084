// sgm: run, compare and inspect subgraph enumeration plans.
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage or parse error,
// 3 strategies disagree on the match count.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgm/sgm.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string graph_path;
  std::string query_path;
  std::string variant = "edge";
  std::string mode = "count";
  std::string strategy = "online";
  int workers = 1;
  bool nested = false;
  std::size_t nested_threshold = 512;
  std::size_t high_degree_threshold = 0;
  std::string stats_out;
  std::optional<std::uint64_t> seed;
};

void add_run_flags(CLI::App* cmd, RunConfig& c, bool with_strategy) {
  cmd->add_option("--graph", c.graph_path, "edge list or CSR snapshot")->required();
  cmd->add_option("--query", c.query_path, "query file")->required();
  cmd->add_option("--variant", c.variant, "edge | vertex")->check(CLI::IsMember({"edge", "vertex"}));
  cmd->add_option("--mode", c.mode, "count | list")->check(CLI::IsMember({"count", "list"}));
  if (with_strategy)
    cmd->add_option("--strategy", c.strategy, "none | eager | online")
        ->check(CLI::IsMember({"none", "eager", "online"}));
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--nested", c.nested, "split large second-loop candidate sets into tasks");
  cmd->add_option("--nested-threshold", c.nested_threshold, "candidate count that triggers nesting");
  cmd->add_option("--high-degree-threshold", c.high_degree_threshold,
                  "degree at which online pruning becomes lazy (0 = max(64, 8|E|/|V|))");
  cmd->add_option("--stats-out", c.stats_out, "write run statistics as JSON");
  cmd->add_option("--seed", c.seed, "accepted for reproducible scripts; enumeration is deterministic");
}

sgm::QueryGraph load_query(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open query file '" + path + "'");
  try {
    return sgm::parse_query(in);
  } catch (const sgm::Error& e) {
    throw UsageError("query file '" + path + "': " + e.what());
  }
}

sgm::CsrGraph load(const std::string& path) {
  if (!std::ifstream(path, std::ios::binary)) throw UsageError("cannot open graph file '" + path + "'");
  try {
    return sgm::load_graph(path);
  } catch (const sgm::ParseError& e) {
    throw UsageError("graph file '" + path + "': " + e.what());
  }
}

sgm::ExecConfig exec_config(const RunConfig& c) {
  sgm::ExecConfig cfg;
  cfg.workers = c.workers;
  cfg.nested = c.nested;
  cfg.nested_threshold = c.nested_threshold;
  cfg.high_degree_threshold = c.high_degree_threshold;
  return cfg;
}

void write_json(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw sgm::Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

int cmd_run(const RunConfig& c) {
  const auto q = load_query(c.query_path);
  const auto g = load(c.graph_path);
  const auto variant = sgm::parse_variant(c.variant);
  const auto plan = sgm::compile_plan(q, sgm::dual_sort_schedule(q, variant), sgm::parse_strategy(c.strategy));
  const bool list = c.mode == "list";
  sgm::MatchSink sink(list ? sgm::MatchSink::Mode::kCollect : sgm::MatchSink::Mode::kCount);
  const auto stats = sgm::execute_parallel(plan, g, sink, exec_config(c));
  if (list) {
    std::string line;
    for (const auto& m : sink.matches()) {
      line.clear();
      for (auto v : sgm::to_query_order(plan, m)) {
        if (!line.empty()) line += ' ';
        line += std::to_string(g.original_id(v));
      }
      std::cout << line << '\n';
    }
    std::cerr << sink.count() << " matches\n";
  } else {
    std::cout << stats.match_count << '\n';
  }
  if (!c.stats_out.empty()) {
    auto j = sgm::to_json(stats);
    j["strategy"] = c.strategy;
    j["variant"] = c.variant;
    write_json(c.stats_out, j);
  }
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string bucket_label(std::size_t b) {
  if (b == 0) return "0";
  const std::uint64_t lo = std::uint64_t{1} << (b - 1), hi = (std::uint64_t{1} << b) - 1;
  return lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
}

int cmd_compare(const RunConfig& c, const std::string& strategy_list) {
  const auto names = split_list(strategy_list);
  if (names.empty()) throw UsageError("--strategies needs at least one of none,eager,online");
  std::vector<sgm::Strategy> strategies;
  for (const auto& s : names) {
    try {
      strategies.push_back(sgm::parse_strategy(s));
    } catch (const sgm::Error& e) {
      throw UsageError(e.what());
    }
  }
  const auto q = load_query(c.query_path);
  const auto g = load(c.graph_path);
  const auto variant = sgm::parse_variant(c.variant);
  const auto sched = sgm::dual_sort_schedule(q, variant);

  std::vector<sgm::RunStats> runs;
  for (auto st : strategies) {
    const auto plan = sgm::compile_plan(q, sched, st);
    sgm::MatchSink sink;
    runs.push_back(sgm::execute_parallel(plan, g, sink, exec_config(c)));
  }
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].match_count != runs[0].match_count) {
      std::cerr << "count mismatch: " << names[0] << "=" << runs[0].match_count << " " << names[i] << "="
                << runs[i].match_count << '\n';
      return kExitMismatch;
    }

  std::cout << std::left << std::setw(8) << "strategy" << std::right << std::setw(14) << "matches"
            << std::setw(14) << "adjacency" << std::setw(14) << "prefix" << std::setw(14) << "pruned"
            << std::setw(14) << "comparisons" << std::setw(12) << "aux_peak_B" << std::setw(11) << "seconds"
            << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    std::cout << std::left << std::setw(8) << names[i] << std::right << std::setw(14) << r.match_count
              << std::setw(14) << r.scanned_adjacency << std::setw(14) << r.scanned_prefix << std::setw(14)
              << r.scanned_pruned << std::setw(14) << r.comparisons << std::setw(12) << r.aux_bytes_peak_per_worker
              << std::setw(11) << std::fixed << std::setprecision(4) << r.elapsed_seconds << '\n';
  }
  std::cout << "\nscanned from adjacency/pruned lists by |N(u)|\n" << std::left << std::setw(14) << "degree";
  for (const auto& n : names) std::cout << std::right << std::setw(14) << n;
  std::cout << '\n';
  for (std::size_t b = 0; b < sgm::kDegreeBuckets; ++b) {
    bool any = false;
    for (const auto& r : runs) any = any || r.scanned_by_degree[b];
    if (!any) continue;
    std::cout << std::left << std::setw(14) << bucket_label(b);
    for (const auto& r : runs) std::cout << std::right << std::setw(14) << r.scanned_by_degree[b];
    std::cout << '\n';
  }
  if (!c.stats_out.empty()) {
    ordered_json j = ordered_json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      auto s = sgm::to_json(runs[i]);
      s["strategy"] = names[i];
      j.push_back(std::move(s));
    }
    write_json(c.stats_out, j);
  }
  return kExitOk;
}

struct GenConfig {
  std::string kind;
  std::uint64_t n = 0;
  double p = 0.0;
  std::uint64_t m = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool snapshot = false;
};

int cmd_gen(const GenConfig& c) {
  std::vector<sgm::Edge> edges;
  try {
    if (c.kind == "er")
      edges = sgm::erdos_renyi_edges(c.n, c.p, c.seed);
    else if (c.kind == "powerlaw")
      edges = sgm::power_law_edges(c.n, c.m, c.seed);
    else
      edges = sgm::clique_edges(c.n);
  } catch (const sgm::Error& e) {
    throw UsageError(e.what());
  }
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) throw sgm::Error("cannot write '" + c.out + "'");
  }
  std::ostream& out = c.out.empty() ? std::cout : file;
  if (c.snapshot)
    sgm::write_snapshot(out, sgm::build_csr(edges, c.n));
  else
    sgm::write_edge_list(out, edges);
  return kExitOk;
}

int cmd_stats(const std::string& path) {
  const auto g = load(path);
  const auto s = sgm::graph_stats(g);
  ordered_json j;
  j["V"] = s.vertex_count;
  j["E"] = s.edge_count;
  j["d_max"] = s.max_degree;
  j["d_avg"] = s.vertex_count ? 2.0 * static_cast<double>(s.edge_count) / static_cast<double>(s.vertex_count) : 0.0;
  j["tri"] = s.triangle_count;
  j["p1"] = s.p1;
  j["p2"] = s.p2;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_plan(const std::string& query_path, const std::string& variant, const std::string& strategy) {
  const auto q = load_query(query_path);
  const auto plan = sgm::compile_plan(q, sgm::dual_sort_schedule(q, sgm::parse_variant(variant)),
                                      sgm::parse_strategy(strategy));
  std::cout << sgm::to_json(plan).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subgraph enumeration with auxiliary-graph pruning"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  auto* run = app.add_subcommand("run", "enumerate or count matches of a query");
  add_run_flags(run, run_cfg, true);

  RunConfig cmp_cfg;
  std::string strategies = "none,eager,online";
  auto* compare = app.add_subcommand("compare", "run several strategies and compare their costs");
  add_run_flags(compare, cmp_cfg, false);
  compare->add_option("--strategies", strategies, "comma-separated list");

  GenConfig gen_cfg;
  auto* gen = app.add_subcommand("gen", "write a synthetic graph");
  gen->add_option("--kind", gen_cfg.kind, "er | powerlaw | clique")
      ->required()
      ->check(CLI::IsMember({"er", "powerlaw", "clique"}));
  gen->add_option("--n", gen_cfg.n, "vertices")->required();
  gen->add_option("--p", gen_cfg.p, "edge probability (er)");
  gen->add_option("--m", gen_cfg.m, "edges per new vertex (powerlaw)");
  gen->add_option("--seed", gen_cfg.seed, "random seed");
  gen->add_option("--out", gen_cfg.out, "output file (default stdout)");
  gen->add_flag("--snapshot", gen_cfg.snapshot, "write the binary CSR snapshot instead of an edge list");

  std::string stats_graph;
  auto* stats = app.add_subcommand("stats", "print graph statistics as JSON");
  stats->add_option("--graph", stats_graph, "edge list or CSR snapshot")->required();

  std::string plan_query, plan_variant = "edge", plan_strategy = "online";
  auto* plan = app.add_subcommand("plan", "print the compiled plan as JSON");
  plan->add_option("--query", plan_query, "query file")->required();
  plan->add_option("--variant", plan_variant)->check(CLI::IsMember({"edge", "vertex"}));
  plan->add_option("--strategy", plan_strategy)->check(CLI::IsMember({"none", "eager", "online"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_cfg);
    if (*compare) return cmd_compare(cmp_cfg, strategies);
    if (*gen) return cmd_gen(gen_cfg);
    if (*stats) return cmd_stats(stats_graph);
    if (*plan) return cmd_plan(plan_query, plan_variant, plan_strategy);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
