#include "wpda/kpaths.hpp"

#include <chrono>
#include <limits>
#include <unordered_set>

#include "wpda/errors.hpp"

namespace wpda {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void require_bounded(const Wpda& m, const SearchOptions& opt) {
  if (!opt.check_bounded_stack) return;
  BoundReport br = check_bounded_stack(m, opt.bounds);
  if (!br.bounded) {
    throw UnboundedInput("bounded-stack check failed: " + br.note);
  }
}

}  // namespace

Weight heuristic_value(const Heuristic& h, Item item, Weight u) {
  switch (h.kind) {
    case HeuristicKind::ExactOutside:
      return times(h.beta->get(item.from, item.to), u);
    case HeuristicKind::ReverseInsideExit:
      return times(u, h.gam->get(item.from, item.to));
    case HeuristicKind::SubproblemExit:
      return times(u, h.d->get(item.to, h.target));
  }
  return Weight::zero();
}

KPathResult astar_kshortest(const Wpda& m, int k, const Heuristic& h,
                            const SearchOptions& opt) {
  require_bounded(m, opt);
  if (h.kind == HeuristicKind::ReverseInsideExit && m.has_negative_weights()) {
    throw HeuristicUnavailable(
        "the exit-distance heuristic is not monotonic with negative weights");
  }

  auto t0 = std::chrono::steady_clock::now();
  WpdaIndex idx(m);
  DerivArena arena;
  KPathResult result;
  SearchStats& stats = result.stats;

  struct Entry {
    Weight priority;
    uint64_t seq;
    DerivId d;
  };
  struct Order {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.priority.value != b.priority.value) {
        return a.priority.value > b.priority.value;
      }
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Order> queue;
  uint64_t seq = 0;

  auto push = [&](DerivId d) {
    const Derivation& n = arena[d];
    Weight pri = heuristic_value(h, {n.from, n.to}, n.weight);
    if (pri.is_zero()) return;
    queue.push({pri, seq++, d});
    ++stats.pushes;
  };

  for (StateId q : entering_states(m)) {
    push(arena.axiom(q));
  }

  // Proven instantiations per item, also grouped by the `to` endpoint for
  // the Complete-as-right-antecedent combinations.
  std::unordered_map<uint64_t, std::vector<DerivId>> proven;
  std::vector<std::vector<DerivId>> proven_by_to(m.num_states);
  std::vector<DerivId> goals;
  Weight last_pri = Weight::of(-std::numeric_limits<double>::infinity());

  while (!queue.empty() && static_cast<int>(goals.size()) < k) {
    Entry e = queue.top();
    queue.pop();
    ++stats.pops;
    if (nat_less(e.priority, last_pri)) stats.pop_order_monotone = false;
    last_pri = e.priority;

    const Derivation& n = arena[e.d];
    Item item{n.from, n.to};
    auto& insts = proven[pack_item(item.from, item.to)];
    if (static_cast<int>(insts.size()) >= k) continue;
    insts.push_back(e.d);
    proven_by_to[item.to].push_back(e.d);
    if (opt.record_pops) {
      stats.pop_log.push_back({item, n.weight, e.priority});
    }

    if (item.from == m.start && item.to == m.final) {
      goals.push_back(e.d);
      if (static_cast<int>(goals.size()) == k) break;
    }

    Weight u = n.weight;
    for (TransitionId t : idx.out[item.to]) {
      const Transition& e1 = m.transitions[t];
      if (e1.label.scans()) {
        push(arena.scan(e.d, t, e1.dst, times(u, e1.weight)));
      } else if (e1.label.is_open()) {
        auto closes = idx.closes_by_open.find(e1.label.symbol);
        if (closes == idx.closes_by_open.end()) continue;
        for (TransitionId t2 : closes->second) {
          const Transition& e2 = m.transitions[t2];
          auto inner = proven.find(pack_item(e1.dst, e2.src));
          if (inner == proven.end()) continue;
          for (DerivId rd : inner->second) {
            Weight w = times(times(u, e1.weight),
                             times(arena[rd].weight, e2.weight));
            push(arena.complete(e.d, t, rd, t2, e2.dst, w));
          }
        }
      } else {
        // The popped instantiation is the right antecedent: match opens
        // landing on its start state.
        SymbolId open_sym = m.parens.partner(e1.label.symbol);
        auto opens = idx.opens_by_sym_dst.find(pack_pair(open_sym, item.from));
        if (opens == idx.opens_by_sym_dst.end()) continue;
        for (TransitionId t2 : opens->second) {
          const Transition& e2 = m.transitions[t2];
          // Left antecedents are proven items ending at the open's source.
          size_t count = proven_by_to[e2.src].size();
          for (size_t i = 0; i < count; ++i) {
            DerivId ld = proven_by_to[e2.src][i];
            Weight w = times(times(arena[ld].weight, e2.weight),
                             times(u, e1.weight));
            push(arena.complete(ld, t2, e.d, t, e1.dst, w));
          }
        }
      }
    }
  }

  stats.exhausted = static_cast<int>(goals.size()) < k;
  for (DerivId g : goals) {
    result.paths.push_back({arena[g].weight, extract_path(m, arena, g)});
  }
  stats.search_seconds = seconds_since(t0);
  return result;
}

MergeResult lazy_pair_merge(const SequenceSource& a, const SequenceSource& b,
                            int k) {
  MergeResult result;
  struct Entry {
    Weight sum;
    uint64_t seq;
    int i, j;  // 1-based ranks
    Weight av, bv;
  };
  struct Order {
    bool operator()(const Entry& x, const Entry& y) const {
      if (x.sum.value != y.sum.value) return x.sum.value > y.sum.value;
      return x.seq > y.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Order> queue;
  std::unordered_set<uint64_t> seen;
  uint64_t seq = 0;

  auto push = [&](int i, int j) {
    if (!seen.insert(pack_pair(i, j)).second) return;
    auto av = a(i);
    if (!av) return;
    auto bv = b(j);
    if (!bv) return;
    queue.push({times(*av, *bv), seq++, i, j, *av, *bv});
    ++result.pushes;
  };

  push(1, 1);
  while (!queue.empty() && static_cast<int>(result.pairs.size()) < k) {
    Entry e = queue.top();
    queue.pop();
    ++result.pops;
    result.pairs.push_back({e.i, e.j, e.av, e.bv, e.sum});
    push(e.i + 1, e.j);
    push(e.i, e.j + 1);
  }
  result.exhausted = static_cast<int>(result.pairs.size()) < k;
  return result;
}

MergeResult lazy_pair_merge(std::span<const Weight> a,
                            std::span<const Weight> b, int k) {
  auto source = [](std::span<const Weight> v) {
    return [v](int rank) -> std::optional<Weight> {
      if (rank < 1 || rank > static_cast<int>(v.size())) return std::nullopt;
      return v[rank - 1];
    };
  };
  return lazy_pair_merge(source(a), source(b), k);
}

LazySearch::LazySearch(const Wpda& m, const WpdaIndex& idx,
                       const WeightTable& d, bool record_pops)
    : m_(m), idx_(idx), d_(d), record_pops_(record_pops) {}

void LazySearch::push(Sub& sub, DerivId d, Weight priority) {
  sub.queue.push({priority, seq_++, d});
  ++sub.stats.pushes;
  ++pushes_;
}

std::optional<Instantiation> LazySearch::find_kth(StateId p, StateId q,
                                                  int rank) {
  Sub& sub = subs_[pack_pair(p, q)];
  if (!sub.started) {
    sub.started = true;
    Weight h = d_.get(p, q);
    if (!h.is_zero()) push(sub, arena_.axiom(p), h);
  }
  if (static_cast<int>(sub.goals.size()) >= rank) {
    DerivId g = sub.goals[rank - 1];
    return Instantiation{{p, q}, arena_[g].weight, g};
  }
  if (sub.running) {
    // A subproblem that (transitively) depends on itself implies an
    // unbounded stack; unreachable once the bounded-stack check passed.
    throw NonTerminating("self-dependent subproblem in lazy search");
  }
  sub.running = true;

  while (!sub.queue.empty()) {
    Entry e = sub.queue.top();
    sub.queue.pop();
    ++sub.stats.pops;
    ++pops_;
    if (nat_less(e.priority, sub.last_priority)) monotone_ = false;
    sub.last_priority = e.priority;

    // arena_ only grows, so this reference stays valid across pushes.
    const Derivation& n = arena_[e.d];
    if (record_pops_) {
      sub.log.push_back({{n.from, n.to}, n.weight, e.priority});
    }

    // Cache a popped goal before resolving its successor: when a promise
    // refers back to this very subproblem, the next rank it asks for is
    // the entry being popped right now.
    bool is_goal = n.to == q;
    if (is_goal) sub.goals.push_back(e.d);

    if (n.kind == Derivation::Kind::Promise) {
      // Advance the inner subproblem one rank and queue the successor.
      const Transition& open = m_.transitions[n.side];
      const Transition& close = m_.transitions[n.closing];
      auto next = find_kth(open.dst, close.src, n.promised_rank + 1);
      if (next) {
        Weight w = times(times(arena_[n.left].weight, open.weight),
                         times(next->weight, close.weight));
        Weight pri = times(w, d_.get(close.dst, q));
        if (!pri.is_zero()) {
          push(sub,
               arena_.promise(n.left, n.side, n.closing, n.promised_rank + 1,
                              n.to, w),
               pri);
        }
      }
    }

    for (TransitionId t : idx_.out[n.to]) {
      const Transition& e1 = m_.transitions[t];
      if (e1.label.scans()) {
        Weight w = times(n.weight, e1.weight);
        Weight pri = times(w, d_.get(e1.dst, q));
        if (pri.is_zero()) continue;
        push(sub, arena_.scan(e.d, t, e1.dst, w), pri);
      } else if (e1.label.is_open()) {
        auto closes = idx_.closes_by_open.find(e1.label.symbol);
        if (closes == idx_.closes_by_open.end()) continue;
        for (TransitionId t2 : closes->second) {
          const Transition& e2 = m_.transitions[t2];
          Weight inner = d_.get(e1.dst, e2.src);
          if (inner.is_zero()) continue;
          // Promise the inner subproblem's best proof instead of computing
          // it now; D prices it exactly.
          Weight w = times(times(n.weight, e1.weight), times(inner, e2.weight));
          Weight pri = times(w, d_.get(e2.dst, q));
          if (pri.is_zero()) continue;
          push(sub, arena_.promise(e.d, t, t2, 1, e2.dst, w), pri);
        }
      }
      // Close labels end the enclosing subproblem and are consumed by the
      // promise machinery, never expanded here.
    }

    if (is_goal && static_cast<int>(sub.goals.size()) >= rank) {
      sub.running = false;
      return Instantiation{{p, q}, n.weight, e.d};
    }
  }
  sub.running = false;
  return std::nullopt;
}

PromiseResolver LazySearch::resolver() const {
  return [this](StateId p, StateId q, int32_t rank) -> DerivId {
    auto it = subs_.find(pack_pair(p, q));
    if (it == subs_.end()) return kNoDeriv;
    const auto& goals = it->second.goals;
    if (rank < 1 || rank > static_cast<int32_t>(goals.size())) return kNoDeriv;
    return goals[rank - 1];
  };
}

std::unordered_map<uint64_t, SubproblemStats> LazySearch::subproblem_stats()
    const {
  std::unordered_map<uint64_t, SubproblemStats> out;
  for (const auto& [key, sub] : subs_) out.emplace(key, sub.stats);
  return out;
}

const std::vector<PopRecord>* LazySearch::pop_log(StateId p, StateId q) const {
  auto it = subs_.find(pack_pair(p, q));
  return it == subs_.end() ? nullptr : &it->second.log;
}

KPathResult lazy_kshortest(const Wpda& m, int k, const SearchOptions& opt) {
  require_bounded(m, opt);

  auto t0 = std::chrono::steady_clock::now();
  WeightTable d = reverse_inside(m, opt.inside);
  WpdaIndex idx(m);
  double precompute = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  LazySearch search(m, idx, d, opt.record_pops);
  std::vector<Instantiation> found;
  for (int i = 1; i <= k; ++i) {
    auto inst = search.find_kth(m.start, m.final, i);
    if (!inst) break;
    found.push_back(*inst);
  }

  KPathResult result;
  PromiseResolver resolve = search.resolver();
  for (const Instantiation& inst : found) {
    result.paths.push_back(
        {inst.weight, extract_path(m, search.arena(), inst.deriv, resolve)});
  }
  result.stats.pops = search.pops();
  result.stats.pushes = search.pushes();
  result.stats.subproblems = search.subproblems();
  result.stats.per_subproblem = search.subproblem_stats();
  result.stats.pop_order_monotone = search.pop_order_monotone();
  result.stats.exhausted = static_cast<int>(found.size()) < k;
  result.stats.precompute_seconds = precompute;
  result.stats.search_seconds = seconds_since(t1);
  return result;
}

}  // namespace wpda
