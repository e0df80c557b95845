#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wpda/semiring.hpp"

namespace wpda {

using StateId = int32_t;
using SymbolId = int32_t;
using TransitionId = int32_t;

inline constexpr StateId kNoState = -1;
inline constexpr SymbolId kNoSymbol = -1;

inline uint64_t pack_pair(int32_t a, int32_t b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

// Interned token names; ids are dense, assigned in first-use order.
class SymbolTable {
 public:
  SymbolId intern(std::string_view name);
  std::optional<SymbolId> find(std::string_view name) const;
  const std::string& name(SymbolId id) const { return names_.at(id); }
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> ids_;
};

enum class LabelKind : uint8_t { Input, Epsilon, Open, Close };

struct Label {
  LabelKind kind = LabelKind::Epsilon;
  SymbolId symbol = kNoSymbol;

  static Label epsilon() { return {LabelKind::Epsilon, kNoSymbol}; }
  static Label input(SymbolId s) { return {LabelKind::Input, s}; }
  static Label open(SymbolId s) { return {LabelKind::Open, s}; }
  static Label close(SymbolId s) { return {LabelKind::Close, s}; }

  bool is_open() const { return kind == LabelKind::Open; }
  bool is_close() const { return kind == LabelKind::Close; }
  bool is_paren() const { return is_open() || is_close(); }
  // Σ ∪ {ε}: labels consumed by the Scan rule.
  bool scans() const {
    return kind == LabelKind::Input || kind == LabelKind::Epsilon;
  }

  friend bool operator==(const Label&, const Label&) = default;
};

// Opening/closing parenthesis alphabets and the bijection pairing them.
class ParenTable {
 public:
  void add_pair(SymbolId open, SymbolId close);
  bool is_open(SymbolId s) const { return opens_.count(s) > 0; }
  bool is_close(SymbolId s) const { return closes_.count(s) > 0; }
  // The paired symbol on the other side of the bijection.
  SymbolId partner(SymbolId s) const { return partner_.at(s); }
  const std::vector<std::pair<SymbolId, SymbolId>>& pairs() const {
    return pairs_;
  }
  bool empty() const { return pairs_.empty(); }

 private:
  std::vector<std::pair<SymbolId, SymbolId>> pairs_;
  std::unordered_map<SymbolId, SymbolId> partner_;
  std::unordered_set<SymbolId> opens_, closes_;
};

struct Transition {
  StateId src = kNoState;
  Label label;
  Weight weight = Weight::one();
  StateId dst = kNoState;
};

// Weighted pushdown automaton represented as a labeled weighted digraph.
// Parenthesis labels encode the stack discipline: consuming an opening
// parenthesis pushes its symbol, consuming the paired closing parenthesis
// pops it.
struct Wpda {
  SymbolTable symbols;
  ParenTable parens;
  std::unordered_set<SymbolId> input_alphabet;
  StateId num_states = 0;
  std::vector<Transition> transitions;
  StateId start = kNoState;
  StateId final = kNoState;

  StateId add_state() { return num_states++; }
  std::pair<SymbolId, SymbolId> add_paren_pair(std::string_view open_tok,
                                               std::string_view close_tok);
  SymbolId add_input_symbol(std::string_view tok);

  TransitionId add_transition(StateId src, Label label, double w, StateId dst);
  TransitionId add_input(StateId src, std::string_view tok, double w,
                         StateId dst);
  TransitionId add_eps(StateId src, double w, StateId dst);
  TransitionId add_open(StateId src, std::string_view open_tok, double w,
                        StateId dst);
  TransitionId add_close(StateId src, std::string_view close_tok, double w,
                         StateId dst);

  const std::string& label_name(const Label& l) const;
  bool has_negative_weights() const;
  // ⊗ never moves a weight earlier in the natural order; holds iff no
  // transition weight is negative.
  bool nondecreasing_times() const { return !has_negative_weights(); }
};

// Epsilon-free weighted finite acceptor (the intersection operand).
// Expansion output reuses this type with epsilon arcs (label = kNoSymbol).
struct WfsaArc {
  StateId src = kNoState;
  SymbolId label = kNoSymbol;  // kNoSymbol = epsilon
  Weight weight = Weight::one();
  StateId dst = kNoState;
};

struct Wfsa {
  SymbolTable symbols;
  StateId num_states = 0;
  std::vector<WfsaArc> arcs;
  StateId start = kNoState;
  std::vector<std::pair<StateId, Weight>> finals;

  StateId add_state() { return num_states++; }
  int32_t add_arc(StateId src, std::string_view tok, double w, StateId dst);
  int32_t add_eps_arc(StateId src, double w, StateId dst);
  void add_final(StateId s, Weight w = Weight::one()) {
    finals.emplace_back(s, w);
  }
  bool epsilon_free() const;
};

// A path is a contiguity-checked sequence of transitions of its host
// automaton, referenced by index.
struct Path {
  std::vector<TransitionId> arcs;
  bool empty() const { return arcs.empty(); }
  size_t size() const { return arcs.size(); }
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate(const Wpda& m);

bool is_contiguous(const Wpda& m, const Path& p);
Weight path_weight(const Wpda& m, const Path& p);

// c_S[π]: the subsequence of the path's labels whose symbol is in the set;
// epsilons are never included.
std::vector<SymbolId> project(const Wpda& m, const Path& p,
                              const std::unordered_set<SymbolId>& symbols);
std::vector<SymbolId> input_projection(const Wpda& m, const Path& p);
std::vector<SymbolId> paren_projection(const Wpda& m, const Path& p);

// True iff the parenthesis projection of the path is in the Dyck language
// of the automaton's paren table (stack scan: opens push, closes must
// match the top).
bool is_balanced(const Wpda& m, const Path& p);

// Balanced path from start to final.  The empty path is accepting iff
// start == final.
bool is_accepting(const Wpda& m, const Path& p);

struct BoundLimits {
  int depth = 1024;
  uint64_t configs = 10'000'000;
};

struct BoundReport {
  bool bounded = false;
  int max_depth = 0;        // K: maximum unmatched-open depth observed
  uint64_t config_count = 0;
  std::string note;         // reason when a limit was hit
};

// Explores reachable (state, open-paren stack) configurations breadth
// first.  Closes when the configuration space is exhausted (Bounded with
// the observed K); a depth or configuration limit hit is a conservative
// "probably unbounded" verdict, not a proof.
BoundReport check_bounded_stack(const Wpda& m, BoundLimits limits = {});

// Flips every transition, swaps start and final, and replaces each open
// label with its paired close label and vice versa.  An involution.
Wpda reverse(const Wpda& m);

// Provenance of product transitions; fsa entry is -1 for transitions that
// did not consume an acceptor arc.
struct IntersectOrigin {
  std::vector<TransitionId> pda;
  std::vector<int32_t> fsa;
};

// Product construction over reachable state pairs: input transitions pair
// with matching acceptor arcs (weights ⊗-combined), ε/paren transitions
// copy with the acceptor state held fixed.  States that cannot reach the
// final are dropped; remaining states are numbered in discovery order.
Wpda intersect(const Wpda& m, const Wfsa& a, IntersectOrigin* origin = nullptr);

// Linear-chain acceptor for a token sequence, all weights one().
Wfsa compile_string(const std::vector<std::string>& tokens,
                    const std::unordered_set<std::string>& alphabet);
Wfsa compile_string(const std::vector<std::string>& tokens, const Wpda& m);

}  // namespace wpda
