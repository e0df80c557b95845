#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "wpda/automata.hpp"
#include "wpda/inference.hpp"
#include "wpda/semiring.hpp"

namespace wpda {

enum class HeuristicKind {
  ExactOutside,       // H1(q1⇝q2 : u) = β(q1⇝q2) ⊗ u
  ReverseInsideExit,  // H2(q1⇝q2 : u) = u ⊗ γ(q1⇝q2)
  SubproblemExit,     // H_pq(p⇝r : u) = u ⊗ D(r, q)
};

// Priority function for the searches; holds non-owning views of the
// precomputed tables it needs.  H1 assumes a commutative semiring; H2 is
// only monotonic when ⊗ is nondecreasing, which astar_kshortest enforces.
struct Heuristic {
  HeuristicKind kind = HeuristicKind::ExactOutside;
  const WeightTable* beta = nullptr;   // ExactOutside
  const GammaTable* gam = nullptr;     // ReverseInsideExit
  const WeightTable* d = nullptr;      // SubproblemExit
  StateId target = kNoState;           // SubproblemExit exit state
};

inline Heuristic make_h1(const WeightTable& beta) {
  return {HeuristicKind::ExactOutside, &beta, nullptr, nullptr, kNoState};
}
inline Heuristic make_h2(const GammaTable& g) {
  return {HeuristicKind::ReverseInsideExit, nullptr, &g, nullptr, kNoState};
}
inline Heuristic make_hpq(const WeightTable& d, StateId q) {
  return {HeuristicKind::SubproblemExit, nullptr, nullptr, &d, q};
}

// The H value of an instantiation.  An absent table entry reads as zero(),
// which the searches treat as "do not push".
Weight heuristic_value(const Heuristic& h, Item item, Weight u);

struct PopRecord {
  Item item;
  Weight weight;
  Weight priority;
};

struct SubproblemStats {
  uint64_t pushes = 0;
  uint64_t pops = 0;
};

struct SearchStats {
  uint64_t pops = 0;
  uint64_t pushes = 0;
  uint64_t subproblems = 0;  // lazy search only
  double precompute_seconds = 0;
  double search_seconds = 0;
  bool pop_order_monotone = true;
  bool exhausted = false;  // fewer paths exist than were requested
  std::vector<PopRecord> pop_log;
  std::unordered_map<uint64_t, SubproblemStats> per_subproblem;

  const SubproblemStats* subproblem(StateId p, StateId q) const {
    auto it = per_subproblem.find(pack_pair(p, q));
    return it == per_subproblem.end() ? nullptr : &it->second;
  }
};

struct PathEntry {
  Weight weight;
  Path path;
};

struct KPathResult {
  std::vector<PathEntry> paths;
  SearchStats stats;
};

struct SearchOptions {
  BoundLimits bounds{};
  bool check_bounded_stack = true;
  bool record_pops = true;
  InsideOptions inside{};
};

// Generalized A* over the deductive logic: pops instantiations in
// nondecreasing priority order and emits the k smallest-weight goal
// instantiations (fewer when fewer exist).  Pops per item are capped at k.
// Requires precomputed heuristic tables; throws UnboundedInput when the
// bounded-stack check fails and HeuristicUnavailable when H2 is requested
// on an automaton with negative weights.
KPathResult astar_kshortest(const Wpda& m, int k, const Heuristic& h,
                            const SearchOptions& opt = {});

// ---------------------------------------------------------------------
// Lazy per-subproblem search.

struct MergedPair {
  int a_rank = 0;  // 1-based
  int b_rank = 0;
  Weight a, b, sum;
};

struct MergeResult {
  std::vector<MergedPair> pairs;
  uint64_t pops = 0;
  uint64_t pushes = 0;
  bool exhausted = false;
};

// 1-based on-demand view of a nondecreasing sequence; nullopt past the end.
using SequenceSource = std::function<std::optional<Weight>(int rank)>;

// The k smallest elements of A × B ordered by ⊗-combination (sum), via the
// frontier queue: push ⟨1,1⟩; popping ⟨i,j⟩ pushes ⟨i+1,j⟩ and ⟨i,j+1⟩ if
// not already seen.  Performs at most 2k pops.  Sets `exhausted` when
// fewer than k pairs exist.
MergeResult lazy_pair_merge(const SequenceSource& a, const SequenceSource& b,
                            int k);
MergeResult lazy_pair_merge(std::span<const Weight> a,
                            std::span<const Weight> b, int k);

// Incremental enumeration of G_pq, the balanced paths from p to q in
// nondecreasing weight order, one priority queue per subproblem.  Inner
// subproblems are entered through promises priced with the reverse inside
// weights and realized only when popped.
class LazySearch {
 public:
  LazySearch(const Wpda& m, const WpdaIndex& idx, const WeightTable& d,
             bool record_pops = true);

  // The rank-th smallest-weight balanced path p → q as a goal
  // instantiation, or nullopt when fewer than rank exist.  Results are
  // cached; repeated calls are O(1) and computation resumes where the
  // previous rank stopped.
  std::optional<Instantiation> find_kth(StateId p, StateId q, int rank);

  const DerivArena& arena() const { return arena_; }
  PromiseResolver resolver() const;

  uint64_t pops() const { return pops_; }
  uint64_t pushes() const { return pushes_; }
  uint64_t subproblems() const { return subs_.size(); }
  bool pop_order_monotone() const { return monotone_; }
  std::unordered_map<uint64_t, SubproblemStats> subproblem_stats() const;
  const std::vector<PopRecord>* pop_log(StateId p, StateId q) const;

 private:
  struct Entry {
    Weight priority;
    uint64_t seq;
    DerivId d;
  };
  struct EntryOrder {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.priority.value != b.priority.value) {
        return a.priority.value > b.priority.value;
      }
      return a.seq > b.seq;
    }
  };
  struct Sub {
    std::priority_queue<Entry, std::vector<Entry>, EntryOrder> queue;
    std::vector<DerivId> goals;
    SubproblemStats stats;
    std::vector<PopRecord> log;
    Weight last_priority = Weight::of(-std::numeric_limits<double>::infinity());
    bool started = false;
    bool running = false;
  };

  void push(Sub& sub, DerivId d, Weight priority);

  const Wpda& m_;
  const WpdaIndex& idx_;
  const WeightTable& d_;
  DerivArena arena_;
  std::unordered_map<uint64_t, Sub> subs_;
  uint64_t seq_ = 0;
  uint64_t pops_ = 0;
  uint64_t pushes_ = 0;
  bool monotone_ = true;
  bool record_pops_;
};

// Runs find_kth(s, f, 1..k) over a freshly computed reverse inside table
// and reads the paths off the cached proofs.  Exact for any path-property
// semiring: no commutativity or nondecreasing-⊗ assumption.
KPathResult lazy_kshortest(const Wpda& m, int k, const SearchOptions& opt = {});

}  // namespace wpda
