#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "wpda/errors.hpp"
#include "wpda/fixtures.hpp"
#include "wpda/gen.hpp"
#include "wpda/kpaths.hpp"
#include "wpda/oracle.hpp"
#include "wpda/textio.hpp"
#include "wpda/toolkit.hpp"

using namespace wpda;
using namespace wpda::testing;

// h2trap states: s=0 q1=1 q2=2 q3=3 q4=4 q5=5 q6=6 q7=7 q8=8 f=9

namespace {

std::multiset<std::pair<StateId, StateId>> popped_items(
    const std::vector<PopRecord>& log) {
  std::multiset<std::pair<StateId, StateId>> items;
  for (const PopRecord& r : log) items.insert({r.item.from, r.item.to});
  return items;
}

}  // namespace

TEST_CASE("heuristic values") {
  Wpda h = fixtures::h2trap();
  WeightTable alpha = inside(h);
  WeightTable beta = outside(h, alpha);
  WeightTable d = reverse_inside(h);
  GammaTable g = gamma(h, d);

  CHECK(heuristic_value(make_h1(beta), {1, 2}, Weight::of(1)) == Weight::of(3));
  CHECK(heuristic_value(make_h2(g), {1, 2}, Weight::of(1)) == Weight::of(2));
  CHECK(heuristic_value(make_h1(beta), {0, 9}, Weight::of(3)) == Weight::of(3));
  CHECK(heuristic_value(make_h2(g), {0, 9}, Weight::of(3)) == Weight::of(3));
  // absent table entries price as zero(), meaning "do not push"
  CHECK(heuristic_value(make_h1(beta), {2, 3}, Weight::of(1)).is_zero());
  // H_pq prices with the reverse inside weight of the remaining stretch
  CHECK(heuristic_value(make_hpq(d, 4), {1, 2}, Weight::of(1)) ==
        Weight::of(2));
}

TEST_CASE("A* with the exact outside heuristic follows the published trace") {
  Wpda h = fixtures::h2trap();
  WeightTable alpha = inside(h);
  WeightTable beta = outside(h, alpha);
  KPathResult r = astar_kshortest(h, 1, make_h1(beta));
  REQUIRE(r.paths.size() == 1);
  CHECK(r.paths[0].weight == Weight::of(3));
  CHECK(path_yield(h, r.paths[0].path, false) == "a a a");
  CHECK(r.stats.pop_order_monotone);

  auto items = popped_items(r.stats.pop_log);
  std::multiset<std::pair<StateId, StateId>> allowed{
      {0, 0}, {1, 1}, {1, 2}, {1, 4}, {0, 6}, {0, 9}};
  for (const auto& it : items) {
    CHECK(allowed.count(it) == 1);
  }
  CHECK(items.count({1, 3}) == 0);  // q1 ⇝ q3 is never popped under H1
  // priorities nondecreasing, all at the shortest distance here
  for (const PopRecord& rec : r.stats.pop_log) {
    CHECK(rec.priority == Weight::of(3));
  }
}

TEST_CASE("A* with the exit heuristic explores the cheap dead-end branch") {
  Wpda h = fixtures::h2trap();
  GammaTable g = gamma(h, reverse_inside(h));
  KPathResult r = astar_kshortest(h, 1, make_h2(g));
  REQUIRE(r.paths.size() == 1);
  CHECK(r.paths[0].weight == Weight::of(3));
  CHECK(r.stats.pop_order_monotone);

  auto items = popped_items(r.stats.pop_log);
  for (StateId q : {1, 3, 5, 7, 8}) {
    CHECK(items.count({1, q}) == 1);
  }
  // strictly more pops than the H1 run (10 vs 6 on this fixture)
  WeightTable beta = outside(h, inside(h));
  KPathResult h1 = astar_kshortest(h, 1, make_h1(beta));
  CHECK(r.stats.pops > h1.stats.pops);

  // the dead-end pops all carry weight 0 and priority 0
  for (const PopRecord& rec : r.stats.pop_log) {
    if (rec.item.from == 1 && rec.item.to != 2 && rec.item.to != 4) {
      CHECK(rec.weight == Weight::of(0));
      CHECK(rec.priority == Weight::of(0));
    }
  }
}

TEST_CASE("A* k=2 on the trap fixture") {
  Wpda h = fixtures::h2trap();
  WeightTable beta = outside(h, inside(h));
  KPathResult r = astar_kshortest(h, 2, make_h1(beta));
  REQUIRE(r.paths.size() == 2);
  CHECK(r.paths[0].weight == Weight::of(3));
  CHECK(r.paths[1].weight == Weight::of(4));
  CHECK(path_yield(h, r.paths[1].path, false) == "b b b b");
  CHECK(check_result_sound(h, r));
}

TEST_CASE("A* rejects unbounded input and H2 with negative weights") {
  Wpda anbn = fixtures::anbn();
  WeightTable beta;  // never reached
  CHECK_THROWS_AS(astar_kshortest(anbn, 1, make_h1(beta)), UnboundedInput);

  Wpda neg = fixtures::h2trap();
  neg.transitions[1].weight = Weight::of(-1);
  GammaTable g = gamma(neg, reverse_inside(neg));
  CHECK_THROWS_AS(astar_kshortest(neg, 1, make_h2(g)), HeuristicUnavailable);
}

TEST_CASE("lazy_pair_merge finds the k smallest combinations") {
  std::vector<Weight> a{Weight::of(0), Weight::of(2), Weight::of(2)};
  std::vector<Weight> b{Weight::of(1), Weight::of(2), Weight::of(4)};
  MergeResult r = lazy_pair_merge(a, b, 3);
  REQUIRE(r.pairs.size() == 3);
  CHECK(r.pairs[0].a.value == 0);
  CHECK(r.pairs[0].b.value == 1);
  CHECK(r.pairs[1].a.value == 0);
  CHECK(r.pairs[1].b.value == 2);
  CHECK(r.pairs[2].a.value == 2);
  CHECK(r.pairs[2].b.value == 1);
  CHECK(r.pops <= 6);
  CHECK(!r.exhausted);

  MergeResult one = lazy_pair_merge(std::vector<Weight>{Weight::of(1)},
                                    std::vector<Weight>{Weight::of(1)}, 5);
  REQUIRE(one.pairs.size() == 1);
  CHECK(one.pairs[0].sum.value == 2);
  CHECK(one.exhausted);

  // k=1 is always the head pair
  MergeResult head = lazy_pair_merge(a, b, 1);
  REQUIRE(head.pairs.size() == 1);
  CHECK(head.pairs[0].a_rank == 1);
  CHECK(head.pairs[0].b_rank == 1);
}

TEST_CASE("lazy_pair_merge property: exact against full sort, at most 2k pops") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    int na = 1 + static_cast<int>(rng() % 6);
    int nb = 1 + static_cast<int>(rng() % 6);
    int k = 1 + static_cast<int>(rng() % 8);
    std::vector<Weight> a, b;
    for (int j = 0; j < na; ++j) a.push_back(Weight::of(rng() % 10));
    for (int j = 0; j < nb; ++j) b.push_back(Weight::of(rng() % 10));
    std::sort(a.begin(), a.end(), nat_less);
    std::sort(b.begin(), b.end(), nat_less);

    MergeResult r = lazy_pair_merge(a, b, k);
    CHECK(r.pops <= 2 * static_cast<uint64_t>(k));

    std::vector<double> sums;
    for (Weight x : a) {
      for (Weight y : b) sums.push_back(times(x, y).value);
    }
    std::sort(sums.begin(), sums.end());
    size_t expect = std::min<size_t>(k, sums.size());
    REQUIRE(r.pairs.size() == expect);
    CHECK(r.exhausted == (expect < static_cast<size_t>(k)));
    for (size_t j = 0; j < expect; ++j) {
      CHECK(r.pairs[j].sum.value == sums[j]);
      CHECK(times(a[r.pairs[j].a_rank - 1], b[r.pairs[j].b_rank - 1]).value ==
            r.pairs[j].sum.value);
    }
  }
}

TEST_CASE("find_kth enumerates subproblems lazily") {
  Wpda h = fixtures::h2trap();
  WeightTable d = reverse_inside(h);
  WpdaIndex idx(h);

  LazySearch search(h, idx, d);
  auto first = search.find_kth(1, 4, 1);
  REQUIRE(first.has_value());
  CHECK(first->weight == Weight::of(2));
  const std::vector<PopRecord>* log = search.pop_log(1, 4);
  REQUIRE(log);
  REQUIRE(log->size() == 3);
  CHECK((*log)[0].item == Item{1, 1});
  CHECK((*log)[0].weight == Weight::of(0));
  CHECK((*log)[1].item == Item{1, 2});
  CHECK((*log)[1].weight == Weight::of(1));
  CHECK((*log)[2].item == Item{1, 4});
  CHECK((*log)[2].weight == Weight::of(2));

  // only one balanced path q1 ⇝ q4 exists
  CHECK(!search.find_kth(1, 4, 2).has_value());

  LazySearch root(h, idx, d);
  auto best = root.find_kth(0, 9, 1);
  REQUIRE(best.has_value());
  CHECK(best->weight == Weight::of(3));
  // the b-branch subproblem is never started
  CHECK(root.pop_log(1, 8) == nullptr);
  CHECK(root.pop_log(1, 4) != nullptr);
}

TEST_CASE("lazy_kshortest matches the trap fixture and its stats") {
  Wpda h = fixtures::h2trap();
  KPathResult r1 = lazy_kshortest(h, 1);
  REQUIRE(r1.paths.size() == 1);
  CHECK(r1.paths[0].weight == Weight::of(3));
  CHECK(path_yield(h, r1.paths[0].path, false) == "a a a");
  CHECK(r1.stats.subproblem(1, 8) == nullptr);  // zero entries for (q1,q8)
  REQUIRE(r1.stats.subproblem(1, 4) != nullptr);
  CHECK(r1.stats.subproblem(1, 4)->pops == 3);
  CHECK(r1.stats.pop_order_monotone);

  KPathResult r2 = lazy_kshortest(h, 2);
  REQUIRE(r2.paths.size() == 2);
  CHECK(r2.paths[0].weight == Weight::of(3));
  CHECK(r2.paths[1].weight == Weight::of(4));
  CHECK(path_yield(h, r2.paths[1].path, false) == "b b b b");
  CHECK(check_result_sound(h, r2));

  KPathResult r5 = lazy_kshortest(fixtures::anbn_aabb(), 5);
  REQUIRE(r5.paths.size() == 1);
  CHECK(r5.paths[0].weight == Weight::one());
  CHECK(r5.stats.exhausted);

  CHECK_THROWS_AS(lazy_kshortest(fixtures::anbn(), 1), UnboundedInput);
}

TEST_CASE("the searches agree with the oracles on random instances") {
  std::mt19937_64 rng(5);
  int done = 0;
  for (int i = 0; i < 30 && done < 10; ++i) {
    gen::CfgOptions opt;
    if (i % 3 == 2) opt.negative_shift = 4;
    gen::CfgInstance inst = gen::random_cfg_intersection(rng(), opt);
    Wpda m = inst.product;
    auto oracle =
        oracle_kshortest_product(m, 5, static_cast<int>(inst.tokens.size()));
    if (!oracle) continue;
    KPathResult brute = std::move(*oracle);
    ++done;
    KPathResult lazy = lazy_kshortest(m, 5);
    WeightTable alpha = inside(m);
    WeightTable beta = outside(m, alpha);
    KPathResult astar = astar_kshortest(m, 5, make_h1(beta));
    KPathResult exp = run_kshortest(m, 5, Algo::Expand);

    CHECK(weight_multiset(lazy) == weight_multiset(brute));
    CHECK(weight_multiset(astar) == weight_multiset(brute));
    CHECK(weight_multiset(exp) == weight_multiset(brute));
    CHECK(check_result_sound(m, lazy));
    CHECK(check_result_sound(m, astar));
    CHECK(check_result_sound(m, exp));
    CHECK(lazy.stats.pop_order_monotone);
    CHECK(astar.stats.pop_order_monotone);
  }
  CHECK(done >= 8);
}

TEST_CASE("lazy handles repeated nesting through promise successors") {
  // Balanced paths s→f: a, (a), ((a)), ... weights 1, 3, 5, ...
  Wpda m;
  StateId s = m.add_state();
  StateId f = m.add_state();
  m.add_paren_pair("(", ")");
  m.start = s;
  m.final = f;
  m.add_input(s, "a", 1, f);
  m.add_open(s, "(", 1, s);
  m.add_close(f, ")", 1, f);
  // each nesting level adds 2 but the stack depth grows with it, so the
  // default bounded-stack check rightly refuses; we skip it deliberately to
  // exercise the per-rank promise resumption on a small depth window.
  SearchOptions opt;
  opt.bounds = {8, 1000};
  opt.check_bounded_stack = false;
  KPathResult r = lazy_kshortest(m, 4, opt);
  REQUIRE(r.paths.size() == 4);
  CHECK(r.paths[0].weight == Weight::of(1));
  CHECK(r.paths[1].weight == Weight::of(3));
  CHECK(r.paths[2].weight == Weight::of(5));
  CHECK(r.paths[3].weight == Weight::of(7));
  CHECK(path_yield(m, r.paths[2].path, true) == "( ( a ) )");
  CHECK(check_result_sound(m, r));
}
