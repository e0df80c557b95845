#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "wpda/errors.hpp"
#include "wpda/fixtures.hpp"
#include "wpda/gen.hpp"
#include "wpda/oracle.hpp"
#include "wpda/textio.hpp"

using namespace wpda;
using namespace wpda::testing;

namespace {

// Linear automaton whose transitions carry the given labels, over the
// paren pairs ()/[].
Wpda chain_of(const std::vector<std::string>& labels) {
  Wpda m;
  m.add_paren_pair("(", ")");
  m.add_paren_pair("[", "]");
  m.add_input_symbol("x");
  StateId prev = m.add_state();
  m.start = prev;
  for (const std::string& l : labels) {
    StateId next = m.add_state();
    if (l == "(" || l == "[") {
      m.add_open(prev, l, 0, next);
    } else if (l == ")" || l == "]") {
      m.add_close(prev, l, 0, next);
    } else {
      m.add_input(prev, l, 0, next);
    }
    prev = next;
  }
  m.final = prev;
  return m;
}

Path full_path(const Wpda& m) {
  Path p;
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    p.arcs.push_back(static_cast<TransitionId>(i));
  }
  return p;
}

// The accepting path of "aabb" in the a^n b^n automaton, read off the
// proof tree: transitions (7)(1)(4)(2)(3)(5)(6)(8).
Path aabb_path(const Wpda& anbn) {
  TransitionId open = find_arc(anbn, 0, "(", 1);
  TransitionId a = find_arc(anbn, 1, "a", 0);
  TransitionId b1 = find_arc(anbn, 0, "b", 2);
  TransitionId close = find_arc(anbn, 2, ")", 3);
  TransitionId b2 = find_arc(anbn, 3, "b", 2);
  return Path{{open, a, open, a, b1, close, b2, close}};
}

}  // namespace

TEST_CASE("fixtures validate cleanly") {
  CHECK(validate(fixtures::anbn()).ok());
  CHECK(validate(fixtures::h2trap()).ok());
  CHECK(validate(fixtures::anbn_aabb()).ok());
}

TEST_CASE("validate reports zero weights, overlaps, and dangling states") {
  Wpda m = fixtures::anbn();
  m.transitions[0].weight = Weight::zero();
  auto r = validate(m);
  REQUIRE(!r.ok());
  CHECK(r.issues[0].find("zero weight") != std::string::npos);

  m = fixtures::anbn();
  m.input_alphabet.insert(*m.symbols.find("("));
  r = validate(m);
  REQUIRE(!r.ok());
  CHECK(r.issues[0].find("alphabet overlap") != std::string::npos);

  m = fixtures::anbn();
  m.transitions[0].dst = 99;
  CHECK(!validate(m).ok());

  m = fixtures::anbn();
  m.parens.add_pair(*m.symbols.find("("), m.symbols.intern("}"));
  r = validate(m);
  REQUIRE(!r.ok());
  CHECK(r.issues[0].find("bijection") != std::string::npos);
}

TEST_CASE("project") {
  Wpda m = fixtures::anbn();
  Path p = aabb_path(m);
  std::vector<SymbolId> parens = paren_projection(m, p);
  std::vector<std::string> names;
  for (SymbolId s : parens) names.push_back(m.symbols.name(s));
  CHECK(names == std::vector<std::string>{"(", "(", ")", ")"});

  std::vector<SymbolId> inputs = input_projection(m, p);
  names.clear();
  for (SymbolId s : inputs) names.push_back(m.symbols.name(s));
  CHECK(names == std::vector<std::string>{"a", "a", "b", "b"});

  CHECK(project(m, Path{}, m.input_alphabet).empty());

  // Generic set projection never includes ε.
  std::unordered_set<SymbolId> just_a{*m.symbols.find("a")};
  CHECK(project(m, p, just_a).size() == 2);
}

TEST_CASE("is_balanced is a Dyck check") {
  CHECK(is_balanced(chain_of({"(", ")", "[", "]"}),
                    full_path(chain_of({"(", ")", "[", "]"}))));
  CHECK(!is_balanced(chain_of({"("}), full_path(chain_of({"("}))));
  CHECK(!is_balanced(chain_of({"(", "]", "[", ")"}),
                     full_path(chain_of({"(", "]", "[", ")"}))));
  CHECK(is_balanced(chain_of({"(", "[", "(", ")", "]", ")"}),
                    full_path(chain_of({"(", "[", "(", ")", "]", ")"}))));
}

TEST_CASE("is_accepting") {
  Wpda m = fixtures::anbn();
  CHECK(is_accepting(m, aabb_path(m)));
  CHECK(!is_accepting(m, Path{{find_arc(m, 0, "(", 1)}}));

  Wpda loop;
  loop.start = loop.final = loop.add_state();
  CHECK(is_accepting(loop, Path{}));
  Wpda two;
  two.start = two.add_state();
  two.final = two.add_state();
  CHECK(!is_accepting(two, Path{}));
}

TEST_CASE("check_bounded_stack") {
  BoundReport r = check_bounded_stack(fixtures::anbn(), {64, 10'000});
  CHECK(!r.bounded);

  r = check_bounded_stack(fixtures::anbn_aabb());
  CHECK(r.bounded);
  CHECK(r.max_depth == 2);
  CHECK(r.config_count == 9);

  r = check_bounded_stack(fixtures::h2trap());
  CHECK(r.bounded);
  CHECK(r.max_depth == 1);
}

TEST_CASE("reverse is an involution that swaps parens and endpoints") {
  Wpda m = fixtures::anbn();
  Wpda r = reverse(m);
  CHECK(r.start == m.final);
  CHECK(r.final == m.start);
  // the ( arc q1->q2 becomes a ) arc q2->q1
  const Transition& t = r.transitions[0];
  CHECK(t.src == 1);
  CHECK(t.dst == 0);
  CHECK(t.label.is_close());
  CHECK(r.label_name(t.label) == ")");

  Wpda rr = reverse(r);
  CHECK(rr.num_states == m.num_states);
  CHECK(rr.start == m.start);
  CHECK(rr.final == m.final);
  REQUIRE(rr.transitions.size() == m.transitions.size());
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    CHECK(rr.transitions[i].src == m.transitions[i].src);
    CHECK(rr.transitions[i].dst == m.transitions[i].dst);
    CHECK(rr.transitions[i].label == m.transitions[i].label);
    CHECK(rr.transitions[i].weight == m.transitions[i].weight);
  }

  Wpda single;
  single.start = single.add_state();
  single.final = single.add_state();
  single.add_input(single.start, "a", 3, single.final);
  Wpda rs = reverse(single);
  CHECK(rs.start == 1);
  CHECK(rs.final == 0);
  CHECK(rs.transitions[0].src == 1);
  CHECK(rs.transitions[0].dst == 0);
  CHECK(rs.transitions[0].weight == Weight::of(3));
}

TEST_CASE("intersection reproduces the aabb product") {
  Wpda prod = fixtures::anbn_aabb();
  CHECK(prod.num_states == 9);
  CHECK(prod.transitions.size() == 8);

  // hand-built expected product, states in discovery order
  Wpda expect;
  expect.add_paren_pair("(", ")");
  for (int i = 0; i < 9; ++i) expect.add_state();
  expect.start = 0;
  expect.final = 8;
  expect.add_open(0, "(", 0, 1);
  expect.add_input(1, "a", 0, 2);
  expect.add_open(2, "(", 0, 3);
  expect.add_input(3, "a", 0, 4);
  expect.add_input(4, "b", 0, 5);
  expect.add_close(5, ")", 0, 6);
  expect.add_input(6, "b", 0, 7);
  expect.add_close(7, ")", 0, 8);
  CHECK(isomorphic(prod, expect));

  Wpda anbn = fixtures::anbn();
  Wpda ab = intersect(anbn, compile_string({"a", "b"}, anbn));
  auto paths = brute_force_kshortest(ab, 10, 32, 10'000);
  REQUIRE(paths.paths.size() == 1);
  CHECK(paths.paths[0].weight == Weight::one());

  Wpda aab = intersect(anbn, compile_string({"a", "a", "b"}, anbn));
  CHECK(brute_force_kshortest(aab, 10, 32, 10'000).paths.empty());
}

TEST_CASE("several acceptor finals normalize through a super-final") {
  // two-state acceptor over {a}: stopping after one or two tokens, with
  // different final weights
  Wfsa a;
  StateId s0 = a.add_state();
  StateId s1 = a.add_state();
  StateId s2 = a.add_state();
  a.start = s0;
  a.add_arc(s0, "a", 1, s1);
  a.add_arc(s1, "a", 1, s2);
  a.add_final(s1, Weight::of(7));
  a.add_final(s2, Weight::of(0));

  Wpda loop;
  loop.start = loop.add_state();
  loop.final = loop.start;
  loop.add_input(loop.start, "a", 2, loop.start);

  Wpda prod = intersect(loop, a);
  KPathResult paths = brute_force_kshortest(prod, 5, 16, 100);
  REQUIRE(paths.paths.size() == 2);
  CHECK(paths.paths[0].weight == Weight::of(6));   // a a, final weight 0
  CHECK(paths.paths[1].weight == Weight::of(10));  // a, final weight 7
  CHECK(shortest_distance(prod) == Weight::of(6));
}

TEST_CASE("intersection rejects bad operands") {
  Wpda m = fixtures::anbn();
  Wfsa bad;
  bad.start = bad.add_state();
  StateId t = bad.add_state();
  bad.add_arc(bad.start, "z", 0, t);
  bad.add_final(t);
  CHECK_THROWS_AS(intersect(m, bad), AlphabetMismatch);

  Wfsa eps;
  eps.start = eps.add_state();
  StateId u = eps.add_state();
  eps.add_eps_arc(eps.start, 0, u);
  eps.add_final(u);
  CHECK_THROWS_AS(intersect(m, eps), ValidationError);
}

TEST_CASE("compile_string") {
  Wpda m = fixtures::anbn();
  Wfsa a = compile_string({"a", "a", "b", "b"}, m);
  CHECK(a.num_states == 5);
  CHECK(a.arcs.size() == 4);
  CHECK(a.finals.size() == 1);
  CHECK(a.finals[0].first == 4);
  CHECK(a.epsilon_free());

  Wfsa empty = compile_string({}, m);
  CHECK(empty.num_states == 1);
  CHECK(empty.start == empty.finals[0].first);

  Wfsa one = compile_string({"a"}, m);
  CHECK(one.num_states == 2);
  CHECK(one.arcs.size() == 1);

  CHECK_THROWS_AS(compile_string({"z"}, m), UnknownToken);
}

TEST_CASE("product paths project onto the string and map back to the automaton") {
  std::mt19937_64 seed_rng(11);
  int checked = 0;
  for (int i = 0; i < 12; ++i) {
    gen::CfgOptions opt;
    auto inst = gen::random_cfg_intersection(seed_rng(), opt);
    IntersectOrigin origin;
    Wpda prod = intersect(inst.grammar, compile_string(inst.tokens, inst.grammar),
                          &origin);
    KPathResult found;
    try {
      found = brute_force_kshortest(prod, 8, 2 * prod.num_states + 8, 200'000);
    } catch (const LimitExceeded&) {
      continue;
    }
    for (const PathEntry& pe : found.paths) {
      // Σ-projection equals the string.
      std::vector<std::string> yield;
      for (SymbolId s : input_projection(prod, pe.path)) {
        yield.push_back(prod.symbols.name(s));
      }
      CHECK(yield == inst.tokens);
      // The mapped path is an accepting path of the grammar with the same
      // weight (the string acceptor contributes one()).
      Path back;
      for (TransitionId t : pe.path.arcs) back.arcs.push_back(origin.pda[t]);
      CHECK(is_accepting(inst.grammar, back));
      CHECK(path_weight(inst.grammar, back) == pe.weight);
      ++checked;
    }
  }
  CHECK(checked > 10);
}
