#pragma once

#include <optional>
#include <vector>

#include "wpda/automata.hpp"
#include "wpda/kpaths.hpp"

namespace wpda {

// Ground-truth baselines.  Correct and simple beats fast here: these exist
// to check the search algorithms, not to compete with them.

// Acceptor over reachable (state, open-paren stack) configurations.
// Input/ε transitions copy with the stack unchanged; opening parentheses
// become ε arcs that push, closing parentheses become ε arcs enabled only
// when the stack top matches.  `origin` maps each arc back to the source
// transition.  Throws LimitExceeded past the limits or the optional
// wall-clock deadline.
struct Expansion {
  Wfsa fsa;
  std::vector<TransitionId> origin;
};

Expansion expand(const Wpda& m, BoundLimits limits = {},
                 std::optional<double> deadline_seconds = std::nullopt);

// Exact k shortest accepting paths of an acceptor: A* with the exact
// reverse shortest-distance heuristic and a per-state pop cap of k.
struct WfsaPathEntry {
  Weight weight;
  std::vector<int32_t> arcs;
};

struct WfsaKPaths {
  std::vector<WfsaPathEntry> paths;
  bool exhausted = false;
};

WfsaKPaths wfsa_kshortest(const Wfsa& a, int k,
                          uint64_t max_relaxations = 100'000'000);

// Every balanced path from `from` of length ≤ max_len, found by DFS with a
// Dyck stack filter; when `only_to` is set, just the ones ending there.
// Throws LimitExceeded past max_paths recorded paths or max_steps DFS
// steps.
struct BalancedPath {
  StateId to;
  Weight weight;
  Path path;
};

std::vector<BalancedPath> enumerate_balanced_paths(
    const Wpda& m, StateId from, int max_len, uint64_t max_paths,
    std::optional<StateId> only_to = std::nullopt,
    uint64_t max_steps = 50'000'000);

// Exhaustive enumeration of accepting paths of length ≤ max_len, sorted by
// weight (ties in discovery order) and truncated to k.
KPathResult brute_force_kshortest(const Wpda& m, int k, int max_len,
                                  uint64_t max_paths,
                                  uint64_t max_steps = 50'000'000);

}  // namespace wpda
