#pragma once

#include "wpda/automata.hpp"

namespace wpda {
namespace fixtures {

// The a^n b^n automaton: 4 states, one paren pair, all weights one().
// Unbounded stack on its own; parse strings by intersecting with an
// acceptor.
Wpda anbn();

// The string "a a b b" as a linear acceptor.
Wfsa aabb();

// intersect(anbn(), aabb()): 9 states, 8 transitions, bounded with K = 2.
Wpda anbn_aabb();

// The automaton whose exit-distance heuristic badly underestimates the
// b-branch: two accepting paths of weights 3 and 4.
Wpda h2trap();

}  // namespace fixtures
}  // namespace wpda
