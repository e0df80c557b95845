#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpda/automata.hpp"

namespace wpda {
namespace gen {

// Random bounded WPDAs in the parsing-as-intersection shape: a small
// grammar-like automaton intersected with a string sampled from its own
// language, so at least one accepting path always exists.  Instances whose
// intersection is not verifiably bounded are rejected and redrawn, which
// keeps generation deterministic per seed.
struct CfgOptions {
  int grammar_states = 6;
  int paren_pairs = 2;
  int extra_transitions = 8;
  int string_min = 4;
  int string_max = 10;
  int weight_min = 0;
  int weight_max = 10;
  // Parallel same-symbol readings added along the backbone; values above 1
  // multiply both the parse ambiguity and the intersection size.
  int ambiguity = 1;
  // Shift input-transition weights of the product down by this amount.
  // Cycles in the product carry no input labels, so no negative cycles
  // appear.
  int negative_shift = 0;
  // Adds an ε transition final → start to the grammar so sampled strings
  // can be long concatenations; used by the benchmark sizes.
  bool loop = false;
  // Extra transitions only run from lower to higher state ids, which makes
  // the automaton acyclic (every path count is finite and exact).
  bool forward_only = false;
  // Rejection-sampling verdict limits; larger targets need larger limits
  // since configuration counts grow with the product.
  BoundLimits bound_limits{256, 200'000};
};

struct CfgInstance {
  Wpda grammar;
  std::vector<std::string> tokens;
  Wpda product;
};

CfgInstance random_cfg_intersection(uint64_t seed, const CfgOptions& opt = {});

// A random bounded WPDA built directly (no intersection), for desk-scale
// theorem checks.  Rejection-sampled against the bounded-stack check.
Wpda random_bounded_wpda(uint64_t seed, const CfgOptions& opt = {});

// Layered grid of blocks: every block is a short chain of ambiguous input
// arcs, and blocks call blocks in deeper layers through per-call-site
// parenthesis pairs.  States are shared across call contexts, so the
// configuration space (and hence naive expansion) is much larger than the
// automaton while the stack stays bounded by the layer count.
struct GridOptions {
  int layers = 4;
  int blocks_per_layer = 4;
  int block_length = 6;
  int calls_per_block = 2;
  int parallel_arcs = 2;
  int weight_max = 10;
};

Wpda grid_wpda(uint64_t seed, const GridOptions& opt = {});

// Scales GridOptions so the result has at least `min_states` states.
GridOptions grid_options_for_states(int64_t min_states);

}  // namespace gen
}  // namespace wpda
