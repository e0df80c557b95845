#pragma once

#include <optional>
#include <string>

#include "wpda/kpaths.hpp"
#include "wpda/oracle.hpp"

namespace wpda {

enum class Algo { AstarH1, AstarH2, Lazy, Expand };

std::optional<Algo> algo_from_string(std::string_view name);
std::string_view algo_name(Algo a);

struct RunOptions {
  SearchOptions search{};
  BoundLimits expand_limits{};
  std::optional<double> expand_deadline_seconds;
  // Bench mode: additionally cap expansion configurations at 10 × the
  // automaton's state count, the memory budget the baseline must beat.
  bool expand_budget_by_states = false;
};

// Precomputes whatever tables the algorithm needs, runs it, and fills the
// precompute/search time split.  The expansion route maps the acceptor
// paths back onto automaton transitions.
KPathResult run_kshortest(const Wpda& m, int k, Algo algo,
                          const RunOptions& opt = {});

}  // namespace wpda
