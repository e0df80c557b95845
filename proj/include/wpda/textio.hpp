#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wpda/automata.hpp"

namespace wpda {

// Text formats.
//
// Automaton files: one transition per line, `src<TAB>dst<TAB>label<TAB>weight`
// (any run of blanks is accepted as a separator), a final state as a line
// with the single field `state`, and `#` comment lines.  The start state is
// the source of the first transition line.  `<eps>` is the reserved epsilon
// token.  Paren files: one `open<TAB>close` pair per line; the pairing must
// be a bijection.

inline constexpr std::string_view kEpsilonToken = "<eps>";

std::vector<std::pair<std::string, std::string>> parse_parens(
    std::string_view text);

// WPDA when paren pairs are given: paren-file tokens classify as Π/Π̂,
// `<eps>` as ε, everything else as Σ.  Enforces exactly one final line and
// the structural constraints (throws ValidationError).
Wpda parse_wpda(std::string_view text,
                const std::vector<std::pair<std::string, std::string>>& parens);

// Acceptor otherwise; multiple final lines are allowed.
Wfsa parse_wfsa(std::string_view text);

std::variant<Wpda, Wfsa> parse_automaton(
    std::string_view text,
    const std::vector<std::pair<std::string, std::string>>* parens);

// Round-trips with the parsers up to line order and float formatting.
std::string write_automaton(const Wpda& m);
std::string write_automaton(const Wfsa& a);
std::string write_parens(const Wpda& m);

// Space-separated token yield of a path: ε stripped always, parentheses
// stripped unless keep_parens.
std::string path_yield(const Wpda& m, const Path& p, bool keep_parens);

// Debug form: space-separated `src:label:weight` triples.
std::string path_arcs(const Wpda& m, const Path& p);

}  // namespace wpda
