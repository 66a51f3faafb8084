#pragma once

// Plan execution: a backtracking loop nest over a CSR graph.
//
// Each worker owns two arenas (prefix sets, auxiliary graphs) that follow the
// recursion: a frame marks them on entry and resets on exit. Parallel runs hand
// out first-loop vertices dynamically; with nesting enabled, a frame whose
// second-loop candidate set is large publishes chunks of it as tasks that idle
// workers pick up, reading the owner's frame state without modifying it (lazy
// pruning excepted, which is claimed atomically per entry).

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sgm/arena.hpp"
#include "sgm/aux_graph.hpp"
#include "sgm/cost_model.hpp"
#include "sgm/csr_graph.hpp"
#include "sgm/plan.hpp"

namespace sgm {

struct ExecConfig {
  int workers = 1;
  bool nested = false;
  std::size_t first_loop_chunk = 1;
  std::size_t nested_threshold = 512;
  std::size_t nested_chunk = 0;  // 0: split the candidate set into ~8 chunks per worker
  std::size_t high_degree_threshold = 0;  // 0: default_high_degree_threshold
  bool instrumented = true;
  bool check_invariants = false;  // verify subset relations while running (slow)
  bool verify_chains = false;     // rebuild chained auxiliary lists directly and compare
};

struct DepthStats {
  std::uint64_t scanned_adjacency = 0;
  std::uint64_t scanned_prefix = 0;
  std::uint64_t scanned_pruned = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t slots_materialized = 0;
  std::uint64_t slot_elements = 0;
  std::uint64_t slot_max = 0;
  std::uint64_t aux_built = 0;

  void merge(const DepthStats& o) {
    scanned_adjacency += o.scanned_adjacency;
    scanned_prefix += o.scanned_prefix;
    scanned_pruned += o.scanned_pruned;
    comparisons += o.comparisons;
    slots_materialized += o.slots_materialized;
    slot_elements += o.slot_elements;
    slot_max = std::max(slot_max, o.slot_max);
    aux_built += o.aux_built;
  }
};

inline constexpr std::size_t kDegreeBuckets = 33;

struct RunStats {
  std::uint64_t match_count = 0;
  std::uint64_t scanned_adjacency = 0;
  std::uint64_t scanned_prefix = 0;
  std::uint64_t scanned_pruned = 0;
  std::uint64_t scanned_shadow = 0;  // every element consumed by a kernel, counted independently
  std::uint64_t comparisons = 0;
  std::uint64_t aux_bytes_peak_per_worker = 0;
  std::uint64_t prefix_bytes_peak_per_worker = 0;
  std::uint64_t aux_graphs_built = 0;
  std::uint64_t lists_pruned = 0;
  std::uint64_t lists_deferred = 0;
  std::uint64_t lists_lazy = 0;
  std::uint64_t lists_lazily_pruned = 0;
  std::uint64_t chain_checks = 0;
  std::uint64_t chain_mismatches = 0;
  std::uint64_t nested_groups = 0;
  std::uint64_t nested_tasks = 0;
  int workers = 1;
  double elapsed_seconds = 0.0;
  std::vector<double> busy_seconds;  // per worker
  std::vector<DepthStats> per_depth;
  // Elements scanned from adjacency or pruned lists, bucketed by bit_width of |N(u)|.
  std::array<std::uint64_t, kDegreeBuckets> scanned_by_degree{};

  std::uint64_t scanned_total() const { return scanned_adjacency + scanned_prefix + scanned_pruned; }

  void merge(const RunStats& o) {
    match_count += o.match_count;
    scanned_adjacency += o.scanned_adjacency;
    scanned_prefix += o.scanned_prefix;
    scanned_pruned += o.scanned_pruned;
    scanned_shadow += o.scanned_shadow;
    comparisons += o.comparisons;
    aux_bytes_peak_per_worker = std::max(aux_bytes_peak_per_worker, o.aux_bytes_peak_per_worker);
    prefix_bytes_peak_per_worker = std::max(prefix_bytes_peak_per_worker, o.prefix_bytes_peak_per_worker);
    aux_graphs_built += o.aux_graphs_built;
    lists_pruned += o.lists_pruned;
    lists_deferred += o.lists_deferred;
    lists_lazy += o.lists_lazy;
    lists_lazily_pruned += o.lists_lazily_pruned;
    chain_checks += o.chain_checks;
    chain_mismatches += o.chain_mismatches;
    nested_groups += o.nested_groups;
    nested_tasks += o.nested_tasks;
    if (per_depth.size() < o.per_depth.size()) per_depth.resize(o.per_depth.size());
    for (std::size_t d = 0; d < o.per_depth.size(); ++d) per_depth[d].merge(o.per_depth[d]);
    for (std::size_t b = 0; b < kDegreeBuckets; ++b) scanned_by_degree[b] += o.scanned_by_degree[b];
  }
};

/// Receives matches from all workers. Count mode keeps only the total;
/// collect mode keeps tuples (ordered by matching position) up to a cap.
class MatchSink {
 public:
  enum class Mode { kCount, kCollect };

  explicit MatchSink(Mode mode = Mode::kCount, std::size_t cap = 10'000'000) : mode_(mode), cap_(cap) {}

  Mode mode() const { return mode_; }
  bool collecting() const { return mode_ == Mode::kCollect; }
  std::uint64_t count() const { return count_.load(); }
  const std::vector<std::vector<VertexId>>& matches() const { return matches_; }

  void add_count(std::uint64_t c) { count_.fetch_add(c); }

  /// Appends tuples of `width` ids stored back to back. Throws EngineError
  /// once the cap would be exceeded.
  void append(const std::vector<VertexId>& flat, int width) {
    const std::size_t k = flat.size() / static_cast<std::size_t>(width);
    std::lock_guard lock(mu_);
    if (matches_.size() + k > cap_) throw EngineError("match cap of " + std::to_string(cap_) + " exceeded");
    for (std::size_t i = 0; i < k; ++i)
      matches_.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i * width),
                            flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * width));
    count_.fetch_add(k);
  }

 private:
  Mode mode_;
  std::size_t cap_;
  std::atomic<std::uint64_t> count_{0};
  std::mutex mu_;
  std::vector<std::vector<VertexId>> matches_;
};

/// Reorders a position-ordered match into query-vertex order.
inline std::vector<VertexId> to_query_order(const QueryPlan& plan, std::span<const VertexId> by_position) {
  std::vector<VertexId> out(by_position.size());
  for (std::size_t p = 0; p < by_position.size(); ++p) out[plan.schedule.order[p]] = by_position[p];
  return out;
}

template <bool kInstrumented>
class Executor {
 public:
  Executor(const QueryPlan& plan, const CsrGraph& g, const ExecConfig& cfg, MatchSink& sink)
      : plan_(plan),
        g_(g),
        cfg_(cfg),
        sink_(sink),
        n_(plan.size()),
        cost_(plan.strategy == Strategy::kOnline ? make_cost_model(plan, g, cfg.high_degree_threshold)
                                                 : CostModelState{}) {
    for (int d = 0; d < n_; ++d) {
      distinct_[d] = detail::positions_of(plan.loops[d].distinct_from);
      upper_[d] = detail::positions_of(plan.loops[d].upper_bounds);
      lower_[d] = detail::positions_of(plan.loops[d].lower_bounds);
    }
    if (cost_.high_degree_threshold == 0) cost_.high_degree_threshold = default_high_degree_threshold(g);
  }

  RunStats run() {
    const int workers = std::max(1, cfg_.workers);
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::unique_ptr<Worker>> ws;
    for (int i = 0; i < workers; ++i) ws.push_back(std::make_unique<Worker>(i, n_));
    if (workers == 1) {
      worker_loop(*ws[0]);
    } else {
      std::vector<std::thread> threads;
      for (int i = 0; i < workers; ++i)
        threads.emplace_back([this, &ws, i] {
          try {
            worker_loop(*ws[i]);
          } catch (...) {
            fail(std::current_exception());
          }
        });
      for (auto& t : threads) t.join();
    }
    if (error_) std::rethrow_exception(error_);

    RunStats total;
    total.per_depth.resize(n_ + 1);
    for (auto& w : ws) {
      flush(*w);
      w->stats.aux_bytes_peak_per_worker = w->aux_arena.peak_bytes();
      w->stats.prefix_bytes_peak_per_worker = w->prefix_arena.peak_bytes();
      total.merge(w->stats);
      total.busy_seconds.push_back(w->busy);
    }
    total.workers = workers;
    total.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return total;
  }

 private:
  enum class Source : std::uint8_t { kAdjacency, kPrefix, kPruned };

  struct Context {
    std::vector<VertexSpan> views;
    std::vector<const AuxGraphInstance*> aux;
    std::array<VertexId, kMaxQueryVertices> matched{};
  };

  struct Worker {
    Worker(int id_, int n) : id(id_) {
      stats.per_depth.resize(n + 1);
      scratch.reserve(64);
    }
    int id;
    Arena prefix_arena;
    Arena aux_arena;
    RunStats stats;
    std::uint64_t count = 0;
    std::vector<VertexId> pending;  // collected tuples, flushed to the sink in batches
    VertexSet scratch;
    double busy = 0.0;
  };

  struct TaskGroup {
    Context snapshot;
    VertexSpan candidates;
    std::size_t chunk = 1;
    std::size_t chunks = 0;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
  };

  struct Operand {
    VertexSpan list;
    Source source;
    std::size_t degree;  // |N(u)| for adjacency and pruned lists
  };

  // ---- accounting -------------------------------------------------------

  void account(Worker& w, int depth, Source src, std::size_t scanned, std::size_t degree) {
    if constexpr (kInstrumented) {
      auto& d = w.stats.per_depth[depth];
      switch (src) {
        case Source::kAdjacency:
          d.scanned_adjacency += scanned;
          w.stats.scanned_adjacency += scanned;
          break;
        case Source::kPrefix:
          d.scanned_prefix += scanned;
          w.stats.scanned_prefix += scanned;
          break;
        case Source::kPruned:
          d.scanned_pruned += scanned;
          w.stats.scanned_pruned += scanned;
          break;
      }
      if (src != Source::kPrefix) w.stats.scanned_by_degree[std::bit_width(degree)] += scanned;
    }
  }

  void account_kernel(Worker& w, int depth, const ScanCount& sc) {
    if constexpr (kInstrumented) {
      w.stats.per_depth[depth].comparisons += sc.comparisons;
      w.stats.comparisons += sc.comparisons;
      w.stats.scanned_shadow += sc.total();
    }
  }

  auto prune_hook(Worker& w, int depth) {
    return [this, &w, depth](const PruneScan& ps) {
      if constexpr (kInstrumented) {
        account(w, depth, Source::kPrefix, ps.scan.a, 0);
        account(w, depth, ps.source_pruned ? Source::kPruned : Source::kAdjacency, ps.scan.b,
                g_.degree(ps.vertex));
        account_kernel(w, depth, ps.scan);
        if (ps.lazy) ++w.stats.lists_lazily_pruned;
      }
    };
  }

  // ---- frames -----------------------------------------------------------

  Operand resolve(Worker& w, Context& ctx, const sgm::Operand& o, int depth) {
    switch (o.kind) {
      case sgm::Operand::Kind::kSlot:
        return {ctx.views[o.ref], Source::kPrefix, 0};
      case sgm::Operand::Kind::kAdjacency: {
        const VertexId u = ctx.matched[o.position];
        return {g_.adj(u), Source::kAdjacency, g_.degree(u)};
      }
      case sgm::Operand::Kind::kAux: {
        const VertexId u = ctx.matched[o.position];
        auto hook = prune_hook(w, depth);
        const auto view = ctx.aux[o.ref]->lookup(u, hook);
        if constexpr (kInstrumented)
          if (!view.pruned && ctx.aux[o.ref]->find(u) < ctx.aux[o.ref]->size()) ++w.stats.lists_deferred;
        return {view.list, view.pruned ? Source::kPruned : Source::kAdjacency, g_.degree(u)};
      }
    }
    return {};
  }

  void compute_slot(Worker& w, Context& ctx, const PrefixSlot& s, int depth) {
    VertexId bound = kNoBound;
    for (std::uint32_t m = s.bound_positions; m; m &= m - 1) bound = std::min(bound, ctx.matched[std::countr_zero(m)]);
    const Operand base = resolve(w, ctx, s.base, depth);
    VertexSpan result;
    if (s.steps.empty()) {
      result = truncate_below(base.list, bound);
    } else {
      VertexId* out = nullptr;
      std::size_t cap = 0, size = 0;
      VertexSpan cur = base.list;
      Source cur_src = base.source;
      std::size_t cur_deg = base.degree;
      for (std::size_t i = 0; i < s.steps.size(); ++i) {
        const auto& step = s.steps[i];
        const Operand rhs = resolve(w, ctx, step.operand, depth);
        if (i == 0) {
          cap = step.op == SetOp::kIntersect ? std::min(cur.size(), rhs.list.size()) : cur.size();
          out = w.prefix_arena.template allocate<VertexId>(cap);
        }
        ScanCount sc;
        size = step.op == SetOp::kIntersect ? intersect_into(cur, rhs.list, out, bound, sc)
                                            : subtract_into(cur, rhs.list, out, bound, sc);
        account(w, depth, cur_src, sc.a, cur_deg);
        account(w, depth, rhs.source, sc.b, rhs.degree);
        account_kernel(w, depth, sc);
        cur = VertexSpan(out, size);
        cur_src = Source::kPrefix;
        cur_deg = 0;
      }
      w.prefix_arena.shrink_last(out, cap, size);
      result = cur;
    }
    ctx.views[s.id] = result;
    if constexpr (kInstrumented) {
      auto& d = w.stats.per_depth[depth];
      ++d.slots_materialized;
      d.slot_elements += result.size();
      d.slot_max = std::max<std::uint64_t>(d.slot_max, result.size());
    }
    if (cfg_.check_invariants) {
      if (!is_strictly_sorted(result)) throw EngineError("prefix set not sorted");
      if (s.base.kind == sgm::Operand::Kind::kSlot &&
          !std::includes(base.list.begin(), base.list.end(), result.begin(), result.end()))
        throw EngineError("prefix set is not a subset of its parent");
    }
  }

  void build(Worker& w, Context& ctx, const AuxDirective& d, int depth) {
    AuxBuildRequest req;
    req.directive = &d;
    req.selecting = ctx.views[plan_.slots[d.selecting_slot].storage()];
    req.filtering = ctx.views[plan_.slots[d.filtering_slot].storage()];
    req.source = d.build_source >= 0 ? ctx.aux[d.build_source] : nullptr;
    req.gate = d.gate;
    req.high_degree_threshold = cost_.high_degree_threshold;
    if (d.gate == Gate::kCostModel) {
      double e = 0.0;
      for (const auto& term : cost_.extension[d.id]) {
        double t = term.factor;
        for (int sid : term.live_slots)
          t *= static_cast<double>(sid >= 0 ? ctx.views[sid].size() : g_.vertex_count());
        e += t;
      }
      req.extensions = e;
    }
    AuxBuildStats bs;
    auto hook = prune_hook(w, depth);
    const AuxGraphInstance* inst = build_aux(req, g_, w.aux_arena, bs, hook);
    ctx.aux[d.id] = inst;
    if constexpr (kInstrumented) {
      ++w.stats.aux_graphs_built;
      ++w.stats.per_depth[depth].aux_built;
      w.stats.lists_pruned += bs.pruned;
      w.stats.lists_lazy += bs.lazy;
    }
    if (cfg_.verify_chains && inst->source) {
      ++w.stats.chain_checks;
      for (std::size_t p = 0; p < inst->size(); ++p) {
        if (inst->entry_status(p) != EntryStatus::kPruned) continue;
        const VertexId u = inst->index[p];
        const VertexSet direct = intersect(req.filtering, g_.adj(u), d.self_bound ? u : kNoBound);
        const auto& e = inst->entries[p];
        if (direct.size() != e.size || !std::equal(direct.begin(), direct.end(), e.data)) {
          ++w.stats.chain_mismatches;
          break;
        }
      }
    }
    if (cfg_.check_invariants) {
      for (std::size_t p = 0; p < inst->size(); ++p) {
        if (inst->entry_status(p) != EntryStatus::kPruned) continue;
        const VertexSpan list(inst->entries[p].data, inst->entries[p].size);
        const VertexSpan full = g_.adj(inst->index[p]);
        if (!std::includes(full.begin(), full.end(), list.begin(), list.end()) ||
            !std::includes(req.filtering.begin(), req.filtering.end(), list.begin(), list.end()))
          throw EngineError("pruned list escapes N(u) or the filtering set");
      }
    }
  }

  VertexSpan candidates(const Context& ctx, int depth) const {
    VertexSpan c = ctx.views[plan_.loops[depth].candidate_slot];
    VertexId hi = kNoBound;
    for (int p : upper_[depth]) hi = std::min(hi, ctx.matched[p]);
    c = truncate_below(c, hi);
    if (!lower_[depth].empty()) {
      VertexId lo = 0;
      for (int p : lower_[depth]) lo = std::max(lo, ctx.matched[p]);
      c = c.subspan(static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), lo) - c.begin()));
    }
    return c;
  }

  bool distinct(const Context& ctx, int depth, VertexId v) const {
    for (int p : distinct_[depth])
      if (ctx.matched[p] == v) return false;
    return true;
  }

  void emit(Worker& w, const Context& ctx, int depth, VertexSpan cands) {
    if (!sink_.collecting()) {
      std::uint64_t c = 0;
      if (distinct_[depth].empty()) {
        c = cands.size();
      } else {
        for (VertexId v : cands) c += distinct(ctx, depth, v);
      }
      w.count += c;
      w.stats.match_count += c;
      return;
    }
    for (VertexId v : cands) {
      if (!distinct(ctx, depth, v)) continue;
      w.pending.insert(w.pending.end(), ctx.matched.begin(), ctx.matched.begin() + depth);
      w.pending.push_back(v);
      ++w.stats.match_count;
    }
    if (w.pending.size() >= 4096 * static_cast<std::size_t>(n_)) flush(w);
  }

  void flush(Worker& w) {
    if (!w.pending.empty()) sink_.append(w.pending, n_);
    w.pending.clear();
    if (w.count) sink_.add_count(w.count);
    w.count = 0;
  }

  void extend(Worker& w, Context& ctx, int depth) {
    if (stop_.load(std::memory_order_relaxed)) return;
    const LoopPlan& lp = plan_.loops[depth];
    const auto prefix_mark = w.prefix_arena.mark();
    const auto aux_mark = w.aux_arena.mark();
    for (int sid : lp.compute_slots) compute_slot(w, ctx, plan_.slots[sid], depth);
    for (int did : lp.build_aux) build(w, ctx, plan_.directives[did], depth);
    const VertexSpan cands = candidates(ctx, depth);
    if (depth == n_ - 1) {
      emit(w, ctx, depth, cands);
    } else if (depth == 1 && cfg_.nested && cfg_.workers > 1 && cands.size() > cfg_.nested_threshold) {
      run_nested(w, ctx, cands);
    } else {
      for (VertexId v : cands) {
        if (!distinct(ctx, depth, v)) continue;
        ctx.matched[depth] = v;
        extend(w, ctx, depth + 1);
      }
    }
    w.prefix_arena.reset(prefix_mark);
    w.aux_arena.reset(aux_mark);
  }

  void run_root(Worker& w, Context& ctx, VertexId u) {
    ctx.matched[0] = u;
    extend(w, ctx, 1);
  }

  // ---- parallel driver --------------------------------------------------

  void fail(std::exception_ptr e) {
    std::lock_guard lock(groups_mu_);
    if (!error_) error_ = e;
    stop_ = true;
  }

  void run_chunk(Worker& w, TaskGroup& grp, std::size_t c) {
    struct DoneGuard {
      TaskGroup& g;
      ~DoneGuard() { g.done.fetch_add(1, std::memory_order_release); }
    } guard{grp};
    Context ctx = grp.snapshot;
    const std::size_t begin = c * grp.chunk;
    const std::size_t end = std::min(grp.candidates.size(), begin + grp.chunk);
    ++w.stats.nested_tasks;
    for (std::size_t i = begin; i < end; ++i) {
      const VertexId v = grp.candidates[i];
      if (!distinct(ctx, 1, v)) continue;
      ctx.matched[1] = v;
      extend(w, ctx, 2);
    }
  }

  bool try_help(Worker& w) {
    TaskGroup* grp = nullptr;
    std::size_t c = 0;
    {
      std::lock_guard lock(groups_mu_);
      for (TaskGroup* g : groups_) {
        if (g->next.load() >= g->chunks) continue;
        c = g->next.fetch_add(1);
        if (c < g->chunks) {
          grp = g;
          break;
        }
      }
    }
    if (!grp) return false;
    run_chunk(w, *grp, c);
    return true;
  }

  void run_nested(Worker& w, Context& ctx, VertexSpan cands) {
    TaskGroup grp;
    grp.snapshot = ctx;
    grp.candidates = cands;
    const std::size_t workers = static_cast<std::size_t>(cfg_.workers);
    grp.chunk = cfg_.nested_chunk ? cfg_.nested_chunk : std::max<std::size_t>(1, cands.size() / (8 * workers));
    grp.chunks = (cands.size() + grp.chunk - 1) / grp.chunk;
    ++w.stats.nested_groups;
    {
      std::lock_guard lock(groups_mu_);
      groups_.push_back(&grp);
    }
    for (;;) {
      const std::size_t c = grp.next.fetch_add(1);
      if (c >= grp.chunks) break;
      run_chunk(w, grp, c);
    }
    while (grp.done.load(std::memory_order_acquire) < grp.chunks) std::this_thread::yield();
    std::lock_guard lock(groups_mu_);
    std::erase(groups_, &grp);
  }

  void worker_loop(Worker& w) {
    Context ctx;
    ctx.views.resize(plan_.slots.size());
    ctx.aux.resize(plan_.directives.size());
    const std::size_t nv = g_.vertex_count();
    const std::size_t chunk = std::max<std::size_t>(1, cfg_.first_loop_chunk);
    while (!stop_.load(std::memory_order_relaxed)) {
      auto t0 = std::chrono::steady_clock::now();
      if (try_help(w)) {
        w.busy += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        continue;
      }
      active_roots_.fetch_add(1);
      const std::size_t begin = next_root_.fetch_add(chunk);
      if (begin < nv) {
        const std::size_t end = std::min(nv, begin + chunk);
        for (std::size_t u = begin; u < end; ++u) run_root(w, ctx, static_cast<VertexId>(u));
        active_roots_.fetch_sub(1);
        w.busy += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        continue;
      }
      active_roots_.fetch_sub(1);
      // Roots are exhausted; stay around while another worker may still publish tasks.
      if (active_roots_.load() == 0) break;
      std::this_thread::yield();
    }
  }

  const QueryPlan& plan_;
  const CsrGraph& g_;
  const ExecConfig& cfg_;
  MatchSink& sink_;
  int n_;
  CostModelState cost_;
  std::array<std::vector<int>, kMaxQueryVertices> distinct_;
  std::array<std::vector<int>, kMaxQueryVertices> upper_;
  std::array<std::vector<int>, kMaxQueryVertices> lower_;

  std::atomic<std::size_t> next_root_{0};
  std::atomic<int> active_roots_{0};
  std::atomic<bool> stop_{false};
  std::mutex groups_mu_;
  std::vector<TaskGroup*> groups_;
  std::exception_ptr error_;
};

/// Runs the plan on the calling thread.
inline RunStats execute(const QueryPlan& plan, const CsrGraph& g, MatchSink& sink, ExecConfig cfg = {}) {
  cfg.workers = 1;
  if (cfg.instrumented) return Executor<true>(plan, g, cfg, sink).run();
  return Executor<false>(plan, g, cfg, sink).run();
}

/// Runs the plan on cfg.workers threads. Match counts do not depend on the
/// worker count or nesting.
inline RunStats execute_parallel(const QueryPlan& plan, const CsrGraph& g, MatchSink& sink, const ExecConfig& cfg) {
  if (cfg.workers < 1) throw EngineError("workers must be >= 1");
  if (cfg.instrumented) return Executor<true>(plan, g, cfg, sink).run();
  return Executor<false>(plan, g, cfg, sink).run();
}

/// Schedule, compile and count in one call.
inline std::uint64_t count_matches(const QueryGraph& q, const CsrGraph& g, Variant variant, Strategy strategy,
                                   ExecConfig cfg = {}) {
  const QueryPlan plan = compile_plan(q, dual_sort_schedule(q, variant), strategy);
  MatchSink sink;
  return execute_parallel(plan, g, sink, cfg).match_count;
}

inline nlohmann::ordered_json to_json(const RunStats& s) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["stats_version"] = 1;
  j["match_count"] = s.match_count;
  j["scanned_adjacency"] = s.scanned_adjacency;
  j["scanned_prefix"] = s.scanned_prefix;
  j["scanned_pruned"] = s.scanned_pruned;
  j["comparisons"] = s.comparisons;
  j["aux_bytes_peak_per_worker"] = s.aux_bytes_peak_per_worker;
  j["prefix_bytes_peak_per_worker"] = s.prefix_bytes_peak_per_worker;
  j["aux_graphs_built"] = s.aux_graphs_built;
  j["lists_pruned"] = s.lists_pruned;
  j["lists_lazy"] = s.lists_lazy;
  j["lists_lazily_pruned"] = s.lists_lazily_pruned;
  j["deferred_lookups"] = s.lists_deferred;
  j["nested_groups"] = s.nested_groups;
  j["nested_tasks"] = s.nested_tasks;
  j["workers"] = s.workers;
  j["elapsed_seconds"] = s.elapsed_seconds;
  auto& pd = j["per_depth"] = ordered_json::array();
  for (std::size_t d = 0; d < s.per_depth.size(); ++d) {
    const auto& x = s.per_depth[d];
    pd.push_back({{"depth", d},
                  {"scanned_adjacency", x.scanned_adjacency},
                  {"scanned_prefix", x.scanned_prefix},
                  {"scanned_pruned", x.scanned_pruned},
                  {"comparisons", x.comparisons},
                  {"slots_materialized", x.slots_materialized},
                  {"slot_elements", x.slot_elements},
                  {"slot_max", x.slot_max},
                  {"aux_built", x.aux_built}});
  }
  auto& hist = j["scanned_by_degree_bucket"] = ordered_json::array();
  for (std::size_t b = 0; b < kDegreeBuckets; ++b)
    if (s.scanned_by_degree[b])
      hist.push_back({{"degree_min", b == 0 ? 0 : (std::uint64_t{1} << (b - 1))},
                      {"degree_max", b == 0 ? 0 : (std::uint64_t{1} << b) - 1},
                      {"scanned", s.scanned_by_degree[b]}});
  return j;
}

}  // namespace sgm
