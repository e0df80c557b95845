#pragma once

#include <stdexcept>
#include <string>

namespace wpda {

// The command-line tool maps these onto exit codes: parse and validation
// failures exit 2, resource limits exit 3.

struct ParseError : std::runtime_error {
  ParseError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  size_t line;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlphabetMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct UnknownToken : ValidationError {
  using ValidationError::ValidationError;
};

// Input failed the bounded-stack check required by the search algorithms.
struct UnboundedInput : ValidationError {
  using ValidationError::ValidationError;
};

// Requested heuristic is not monotonic for this automaton's weight range.
struct HeuristicUnavailable : ValidationError {
  using ValidationError::ValidationError;
};

struct LimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relaxation/iteration cap hit: suspected negative cycle or unbounded input.
struct NonTerminating : LimitExceeded {
  using LimitExceeded::LimitExceeded;
};

struct UnresolvedPromise : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace wpda
