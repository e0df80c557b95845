#pragma once

// Shared helpers for the unit and acceptance suites.  The enumeration and
// counting code here is deliberately independent of the library's search
// implementations: it re-derives expectations from the rule definitions.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpda/automata.hpp"
#include "wpda/errors.hpp"
#include "wpda/inference.hpp"
#include "wpda/kpaths.hpp"
#include "wpda/oracle.hpp"

namespace wpda::testing {

inline TransitionId find_arc(const Wpda& m, StateId src,
                             const std::string& label, StateId dst) {
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const Transition& t = m.transitions[i];
    if (t.src == src && t.dst == dst && m.label_name(t.label) == label) {
      return static_cast<TransitionId>(i);
    }
  }
  throw std::runtime_error("no arc " + std::to_string(src) + " -" + label +
                           "-> " + std::to_string(dst));
}

// Soundness of a search result: every path is accepting and its weight
// matches the reported weight; paths are pairwise distinct.
inline bool check_result_sound(const Wpda& m, const KPathResult& r) {
  std::vector<std::vector<TransitionId>> seen;
  for (const PathEntry& pe : r.paths) {
    if (!is_accepting(m, pe.path)) return false;
    if (path_weight(m, pe.path) != pe.weight) return false;
    seen.push_back(pe.path.arcs);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  for (size_t i = 1; i < r.paths.size(); ++i) {
    if (nat_less(r.paths[i].weight, r.paths[i - 1].weight)) return false;
  }
  return true;
}

inline std::vector<double> weight_multiset(const KPathResult& r) {
  std::vector<double> w;
  for (const PathEntry& pe : r.paths) w.push_back(pe.weight.value);
  std::sort(w.begin(), w.end());
  return w;
}

// Results must return the same paths up to reordering within equal
// weights.  Below the heaviest returned weight the path sets must match
// exactly; at the boundary weight different algorithms may legitimately
// pick different members of the tied class, so only the counts have to
// agree (which weight_multiset already checks).
inline bool same_paths_up_to_ties(const KPathResult& a, const KPathResult& b) {
  if (weight_multiset(a) != weight_multiset(b)) return false;
  if (a.paths.empty()) return true;
  double cutoff = a.paths.back().weight.value;
  auto strict = [&](const KPathResult& r) {
    std::vector<std::vector<TransitionId>> paths;
    for (const PathEntry& pe : r.paths) {
      if (pe.weight.value != cutoff) paths.push_back(pe.path.arcs);
    }
    std::sort(paths.begin(), paths.end());
    return paths;
  };
  return strict(a) == strict(b);
}

// Canonical structural form for comparing automata up to state renaming:
// states renumbered by BFS discovery over out-transitions sorted by
// (kind, label, weight); adequate for the small deterministic fixtures it
// is used on.
struct CanonicalForm {
  StateId num_states;
  StateId start, final;
  std::vector<std::tuple<StateId, int, std::string, double, StateId>> arcs;
  bool operator==(const CanonicalForm&) const = default;
};

inline CanonicalForm canonical_form(const Wpda& m) {
  std::vector<std::vector<TransitionId>> out(m.num_states);
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    out[m.transitions[i].src].push_back(static_cast<TransitionId>(i));
  }
  auto arc_key = [&](TransitionId t) {
    const Transition& e = m.transitions[t];
    return std::make_tuple(static_cast<int>(e.label.kind),
                           m.label_name(e.label), e.weight.value);
  };
  for (auto& v : out) {
    std::sort(v.begin(), v.end(), [&](TransitionId a, TransitionId b) {
      return arc_key(a) < arc_key(b);
    });
  }
  std::vector<StateId> renum(m.num_states, kNoState);
  std::deque<StateId> queue;
  StateId next = 0;
  auto visit = [&](StateId q) {
    if (renum[q] == kNoState) {
      renum[q] = next++;
      queue.push_back(q);
    }
  };
  visit(m.start);
  CanonicalForm cf;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (TransitionId t : out[q]) {
      const Transition& e = m.transitions[t];
      visit(e.dst);
      cf.arcs.emplace_back(renum[q], static_cast<int>(e.label.kind),
                           m.label_name(e.label), e.weight.value,
                           renum[e.dst]);
    }
  }
  if (m.final != kNoState) visit(m.final);
  cf.num_states = next;
  cf.start = renum[m.start];
  cf.final = renum[m.final];
  std::sort(cf.arcs.begin(), cf.arcs.end());
  return cf;
}

inline bool isomorphic(const Wpda& a, const Wpda& b) {
  return canonical_form(a) == canonical_form(b);
}

// Exact k-shortest oracle for generated intersection instances.  The
// plain length-bounded enumeration can stop short of the k-th path when a
// cheap cycle pumps; this wrapper grows the length bound until it provably
// covers every path at most as heavy as the heaviest one found.  The bound
// uses two generator invariants: ε and close arcs cost at least 1, and an
// accepting path consumes each of the `num_tokens` string positions
// exactly once.  Returns nullopt when the enumeration blows its cap.
inline std::optional<KPathResult> oracle_kshortest_product(
    const Wpda& m, int k, int num_tokens, uint64_t max_paths = 400'000) {
  double w_in_min = 0;
  bool any_input = false;
  for (const Transition& t : m.transitions) {
    if (t.label.kind == LabelKind::Input) {
      w_in_min =
          any_input ? std::min(w_in_min, t.weight.value) : t.weight.value;
      any_input = true;
    }
  }
  int len = 2 * m.num_states + 10;
  for (int round = 0; round < 12; ++round) {
    KPathResult r;
    try {
      r = brute_force_kshortest(m, k, len, max_paths, 20'000'000);
    } catch (const LimitExceeded&) {
      return std::nullopt;
    }
    if (r.paths.empty()) return r;
    // weight ≥ (length - T)/2 + T*w_in_min, so anything at most as heavy
    // as the k-th found fits in this length:
    double heaviest = r.paths.back().weight.value;
    double cover = num_tokens + 2 * (heaviest - num_tokens * w_in_min) + 2;
    if (cover <= static_cast<double>(len)) return r;
    len = static_cast<int>(cover) + 1;
  }
  return std::nullopt;
}

// Counts distinct goal derivations of weight ≤ bound by saturating the two
// inference rules directly, combining each new instantiation with the ones
// processed before it.  Nonnegative weights only (the bound prunes).
inline uint64_t count_goal_derivations(const Wpda& m, double bound,
                                       uint64_t max_insts = 2'000'000) {
  struct Inst {
    StateId from, to;
    double w;
  };
  std::vector<Inst> insts;
  std::vector<std::vector<TransitionId>> out(m.num_states);
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    out[m.transitions[i].src].push_back(static_cast<TransitionId>(i));
  }
  // processed instantiations grouped by item endpoints
  std::map<std::pair<StateId, StateId>, std::vector<size_t>> by_item;
  std::vector<std::vector<size_t>> by_to(m.num_states);

  auto add = [&](StateId from, StateId to, double w) {
    if (w > bound) return;
    if (insts.size() >= max_insts) {
      throw LimitExceeded("derivation counting blew past the cap");
    }
    insts.push_back({from, to, w});
  };
  for (StateId q : entering_states(m)) add(q, q, 0.0);

  uint64_t goals = 0;
  for (size_t i = 0; i < insts.size(); ++i) {
    Inst inst = insts[i];
    if (inst.from == m.start && inst.to == m.final) ++goals;
    by_item[{inst.from, inst.to}].push_back(i);
    by_to[inst.to].push_back(i);
    for (TransitionId t : out[inst.to]) {
      const Transition& e = m.transitions[t];
      if (e.label.scans()) {
        add(inst.from, e.dst, inst.w + e.weight.value);
      } else if (e.label.is_open()) {
        // all closes pairing with this open
        for (size_t ci = 0; ci < m.transitions.size(); ++ci) {
          const Transition& e2 = m.transitions[ci];
          if (!e2.label.is_close() ||
              m.parens.partner(e2.label.symbol) != e.label.symbol) {
            continue;
          }
          auto it = by_item.find({e.dst, e2.src});
          if (it == by_item.end()) continue;
          for (size_t j : it->second) {
            add(inst.from, e2.dst,
                inst.w + e.weight.value + insts[j].w + e2.weight.value);
          }
        }
      } else {
        // popped instantiation as the right antecedent
        SymbolId open_sym = m.parens.partner(e.label.symbol);
        for (size_t oi = 0; oi < m.transitions.size(); ++oi) {
          const Transition& e2 = m.transitions[oi];
          if (!e2.label.is_open() || e2.label.symbol != open_sym ||
              e2.dst != inst.from) {
            continue;
          }
          for (size_t j : by_to[e2.src]) {
            // skip self: (i, i) pairs handled once via the left loop above
            if (j == i) continue;
            add(insts[j].from, e.dst,
                insts[j].w + e2.weight.value + inst.w + e.weight.value);
          }
        }
      }
    }
  }
  return goals;
}

}  // namespace wpda::testing
