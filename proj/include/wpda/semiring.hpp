#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace wpda {

// Weight in the tropical semiring <R ∪ {+inf}, min, +, inf, 0>.  The order
// used throughout ("k shortest") is the semiring's natural ordering, which
// for tropical weights coincides with the numeric order.  Negative values
// are permitted; -inf is not a weight.
struct Weight {
  double value = std::numeric_limits<double>::infinity();

  static constexpr Weight zero() {
    return {std::numeric_limits<double>::infinity()};
  }
  static constexpr Weight one() { return {0.0}; }
  static constexpr Weight of(double v) { return {v}; }

  bool is_zero() const { return std::isinf(value) && value > 0; }

  friend bool operator==(Weight a, Weight b) { return a.value == b.value; }
  friend bool operator!=(Weight a, Weight b) { return a.value != b.value; }
};

inline Weight plus(Weight a, Weight b) {
  return {std::min(a.value, b.value)};
}

inline Weight times(Weight a, Weight b) { return {a.value + b.value}; }

// a <= b in the natural ordering iff a ⊕ b = a.  Total because ⊕ has the
// path property (min always returns one of its arguments).
inline bool nat_leq(Weight a, Weight b) { return plus(a, b) == a; }
inline bool nat_less(Weight a, Weight b) { return nat_leq(a, b) && a != b; }

// Description of the shipped semiring instance.  Whether ⊗ is
// nondecreasing in the natural order depends on the weight range of a
// particular automaton and is checked where automata are loaded.
struct SemiringSpec {
  bool commutative = true;
  bool idempotent_plus = true;
};
inline constexpr SemiringSpec kTropicalSpec{};

// Decimal text, shortest form that round-trips; zero() renders as "inf".
inline std::string weight_to_string(Weight w) {
  if (w.is_zero()) return "inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), w.value);
  return std::string(buf, res.ptr);
}

inline std::optional<Weight> weight_from_string(std::string_view s) {
  if (s == "inf" || s == "+inf" || s == "Infinity") return Weight::zero();
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return Weight::of(v);
}

}  // namespace wpda
