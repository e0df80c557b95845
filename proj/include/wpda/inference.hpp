#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "wpda/automata.hpp"
#include "wpda/semiring.hpp"

namespace wpda {

// Items of the deductive logic are of the form q1 ⇝ q2: "there is a
// balanced path from q1 to q2".
struct Item {
  StateId from = kNoState;
  StateId to = kNoState;
  friend bool operator==(const Item&, const Item&) = default;
};

inline uint64_t pack_item(StateId from, StateId to) {
  return pack_pair(from, to);
}
inline Item unpack_item(uint64_t key) {
  return {static_cast<StateId>(key >> 32),
          static_cast<StateId>(key & 0xffffffff)};
}

// Sparse map from items to weights; an absent entry means unprovable and
// reads as zero().
class WeightTable {
 public:
  Weight get(StateId from, StateId to) const {
    auto it = map_.find(pack_item(from, to));
    return it == map_.end() ? Weight::zero() : it->second;
  }
  bool contains(StateId from, StateId to) const {
    return map_.count(pack_item(from, to)) > 0;
  }
  void set(StateId from, StateId to, Weight w) {
    map_[pack_item(from, to)] = w;
  }
  size_t size() const { return map_.size(); }
  const std::unordered_map<uint64_t, Weight>& entries() const { return map_; }
  // `from<TAB>to<TAB>weight` lines, sorted by (from, to).
  void dump(std::ostream& os) const;

 private:
  std::unordered_map<uint64_t, Weight> map_;
};

// Adjacency and rule-matching indexes shared by the inference and search
// algorithms.
struct WpdaIndex {
  std::vector<std::vector<TransitionId>> out;  // by source state
  std::vector<std::vector<TransitionId>> in;   // by destination state
  // Close transitions grouped by the symbol of the matching open.
  std::unordered_map<SymbolId, std::vector<TransitionId>> closes_by_open;
  // Open transitions grouped by symbol, and by (symbol, destination).
  std::unordered_map<SymbolId, std::vector<TransitionId>> opens_by_sym;
  std::unordered_map<uint64_t, std::vector<TransitionId>> opens_by_sym_dst;

  explicit WpdaIndex(const Wpda& m);
};

// The start state plus every target of an open-parenthesis transition;
// exactly the states q whose axiom q ⇝ q : 1̄ exists.  Sorted.
std::vector<StateId> entering_states(const Wpda& m);

// States with an outgoing close-parenthesis transition.  Sorted.
std::vector<StateId> exiting_states(const Wpda& m);

struct InsideOptions {
  uint64_t max_relaxations = 100'000'000;
};

// Inside weights: α[q1⇝q2] = ⊕ over the weights of all proofs of q1⇝q2,
// i.e. the shortest balanced-path weight from entering state q1 to q2.
// Agenda-based relaxation; throws NonTerminating past the relaxation cap
// (suspected negative cycle or unbounded input).
WeightTable inside(const Wpda& m, const InsideOptions& opt = {});

// α[s⇝f]; zero() when there is no accepting path.
Weight shortest_distance(const Wpda& m, const InsideOptions& opt = {});

// Outside weights: β[q1⇝q2] = ⊕ over w[μ] ⊗ w[ν] for all prefix/suffix
// pairs μ, ν completing the item to an accepting path.  Computed by
// applying Scan and Complete in reverse from β[s⇝f] = 1̄.  Returns an
// empty table when s⇝f is unprovable.  Assumes a commutative semiring.
WeightTable outside(const Wpda& m, const WeightTable& alpha,
                    const InsideOptions& opt = {});

// Reverse inside weights: D(r, q) = shortest balanced-path weight from r
// to q in m, for q an entering state of reverse(m) (the exiting states of
// m, plus f).  Keyed as (r, q); absent = no balanced path.
WeightTable reverse_inside(const Wpda& m, const InsideOptions& opt = {});

// γ[q1⇝q2] = ⊕ of D(q2, x) over exiting states x, additionally including
// D(q2, f) when q1 = s.  Depends on q1 only through that clause, so it is
// stored as two tables keyed by q2.
struct GammaTable {
  StateId start = kNoState;
  std::unordered_map<StateId, Weight> from_start;  // items s ⇝ q2
  std::unordered_map<StateId, Weight> from_other;  // items q1 ⇝ q2, q1 ≠ s

  Weight get(StateId item_from, StateId q2) const {
    const auto& t = item_from == start ? from_start : from_other;
    auto it = t.find(q2);
    return it == t.end() ? Weight::zero() : it->second;
  }
  void dump(std::ostream& os) const;
};

GammaTable gamma(const Wpda& m, const WeightTable& d);

// ---------------------------------------------------------------------
// Derivations (proof trees with side conditions).

using DerivId = int32_t;
inline constexpr DerivId kNoDeriv = -1;

struct Derivation {
  enum class Kind : uint8_t { Axiom, Scan, Complete, Promise };
  Kind kind = Kind::Axiom;
  StateId from = kNoState;
  StateId to = kNoState;
  Weight weight = Weight::one();
  TransitionId side = -1;      // Scan side condition / opening transition
  TransitionId closing = -1;   // Complete and Promise closing transition
  DerivId left = kNoDeriv;     // Scan antecedent / Complete left antecedent
  DerivId right = kNoDeriv;    // Complete right antecedent
  int32_t promised_rank = 0;   // Promise: 1-based rank into the subproblem
};

class DerivArena {
 public:
  DerivId axiom(StateId q);
  DerivId scan(DerivId antecedent, TransitionId side, StateId to, Weight w);
  DerivId complete(DerivId left, TransitionId open, DerivId right,
                   TransitionId close, StateId to, Weight w);
  // Complete whose right antecedent is deferred: the rank-th best proof of
  // the subproblem (dst of open ⇝ src of close), resolved through a cache.
  DerivId promise(DerivId left, TransitionId open, TransitionId close,
                  int32_t rank, StateId to, Weight w);

  const Derivation& operator[](DerivId id) const { return nodes_[id]; }
  size_t size() const { return nodes_.size(); }

 private:
  std::deque<Derivation> nodes_;
};

struct Instantiation {
  Item item;
  Weight weight = Weight::zero();
  DerivId deriv = kNoDeriv;
};

// Maps a promised (p, q, rank) to a concrete derivation, or kNoDeriv.
using PromiseResolver = std::function<DerivId(StateId, StateId, int32_t)>;

// Reads off side-condition transitions in left-to-right post-order.
// Promise nodes are resolved through the resolver; throws
// UnresolvedPromise when one cannot be resolved.
Path extract_path(const Wpda& m, const DerivArena& arena, DerivId root,
                  const PromiseResolver& resolver = nullptr);

}  // namespace wpda
