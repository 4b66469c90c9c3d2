#include <catch2/catch_amalgamated.hpp>

#include "plegma/core.hpp"

using namespace plegma;

namespace {

// Independent census: walk every l-tuple of k-subsets and test the defining
// inequalities directly, with no reuse of the library's enumeration order.
long long brute_force_census(int n, int k, int l) {
  std::vector<FinSubset> all;
  for_each_subset(Universe::initial_segment(n), k, [&](const FinSubset& s) {
    all.push_back(s);
    return true;
  });
  long long count = 0;
  std::vector<int> pick(l, 0);
  std::function<void(int, int)> rec = [&](int depth, int start) {
    if (depth == l) {
      PlegmaTuple t;
      for (int i : pick) t.push_back(all[i]);
      bool ok = true;
      for (int i = 1; i <= k && ok; ++i) {
        for (int j = 1; j < l && ok; ++j)
          if (t[j - 1].at1(i) >= t[j].at1(i)) ok = false;
        if (i < k && t[l - 1].at1(i) >= t[0].at1(i + 1)) ok = false;
      }
      if (ok) ++count;
      return;
    }
    for (int i = start; i < (int)all.size(); ++i) {
      pick[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return count;
}

}  // namespace

TEST_CASE("plegma pair basics") {
  CHECK(is_plegma_pair(FinSubset({1, 3}), FinSubset({2, 4})));
  CHECK_FALSE(is_plegma_pair(FinSubset({1, 2}), FinSubset({3, 4})));
  CHECK_FALSE(is_plegma_pair(FinSubset({2, 4}), FinSubset({1, 3})));
  CHECK(is_plegma_pair(FinSubset({1}), FinSubset({2})));
  CHECK_THROWS_AS(is_plegma_pair(FinSubset({1}), FinSubset({2, 3})), InvalidInput);
}

TEST_CASE("single member tuples and single coordinates are degenerate") {
  CHECK(is_plegma({FinSubset({2, 7})}));
  CHECK(is_plegma({FinSubset({1}), FinSubset({2}), FinSubset({5})}));
  CHECK_FALSE(is_plegma({FinSubset({2}), FinSubset({2})}));
  CHECK_THROWS_AS(is_plegma({}), InvalidInput);
}

TEST_CASE("plegma census equals one binomial") {
  for (int n = 2; n <= 7; ++n)
    for (int k = 1; k <= 3; ++k)
      for (int l = 1; l <= 3; ++l) {
        if (k * l > n) continue;
        long long oracle = brute_force_census(n, k, l);
        CHECK(oracle == binomial(n, k * l));
        auto listed = enumerate_plegma(Universe::initial_segment(n), k, l);
        CHECK((long long)listed.size() == oracle);
        for (const auto& t : listed) CHECK(is_plegma(t));
      }
}

TEST_CASE("flat correspondence") {
  FinSubset flat({1, 2, 3, 4});
  PlegmaTuple t = plegma_from_flat(flat, 2, 2);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == FinSubset({1, 3}));
  CHECK(t[1] == FinSubset({2, 4}));
  CHECK(flat_from_plegma(t) == flat);

  // k = 1: members are singletons in flat order.
  PlegmaTuple u = plegma_from_flat(FinSubset({2, 5, 9}), 1, 3);
  CHECK(u[0] == FinSubset({2}));
  CHECK(u[1] == FinSubset({5}));
  CHECK(u[2] == FinSubset({9}));

  // l = 1: the flat is the single member.
  PlegmaTuple v = plegma_from_flat(FinSubset({2, 5, 9}), 3, 1);
  CHECK(v[0] == FinSubset({2, 5, 9}));
}

TEST_CASE("flat correspondence round trips") {
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l)
      for_each_subset(Universe::initial_segment(8), k * l, [&](const FinSubset& f) {
        PlegmaTuple t = plegma_from_flat(f, k, l);
        REQUIRE(is_plegma(t));
        CHECK(flat_from_plegma(t) == f);
        return true;
      });
}

TEST_CASE("row step ordering agrees on square shapes and fails otherwise") {
  FinSubset flat({1, 2, 3, 4});
  PlegmaTuple a = plegma_from_flat(flat, 2, 2, FlatFormula::kColumnMajor);
  PlegmaTuple b = plegma_from_flat(flat, 2, 2, FlatFormula::kLegacyRowStep);
  CHECK(a == b);
  CHECK_THROWS_AS(
      plegma_from_flat(FinSubset({1, 2, 3, 4, 5, 6}), 2, 3, FlatFormula::kLegacyRowStep),
      InvalidInput);
}

TEST_CASE("sub tuples and coordinate projections stay plegma") {
  Universe u = Universe::initial_segment(9);
  int checked = 0;
  for_each_plegma(u, 2, 3, [&](const PlegmaTuple& t) {
    // Drop the middle member.
    CHECK(is_plegma(restrict(t, {1, 2}, {1, 3})));
    // Project to the second coordinate.
    CHECK(is_plegma(restrict(t, {2}, {1, 2, 3})));
    // Both at once.
    CHECK(is_plegma(restrict(t, {1}, {2, 3})));
    return ++checked < 40;
  });
  CHECK(checked == 40);
}

TEST_CASE("skipped subsets") {
  Universe u = Universe::initial_segment(9);
  CHECK(is_skipped(FinSubset({1, 3}), u));
  CHECK_FALSE(is_skipped(FinSubset({1, 2}), u));
  CHECK(is_skipped(FinSubset({2, 5, 9}), Universe::explicit_set({1, 2, 3, 5, 7, 9})));
  CHECK_THROWS_AS(is_skipped(FinSubset({4}), Universe::explicit_set({1, 2})),
                  InvalidInput);
}

TEST_CASE("interleaving inserts least gap witnesses") {
  Universe u = Universe::initial_segment(9);
  CHECK(interleave_with_gaps(FinSubset({1, 3}), u) == FinSubset({1, 2, 3}));
  CHECK(interleave_with_gaps(FinSubset({2, 5, 9}), u) == FinSubset({2, 3, 5, 6, 9}));
  CHECK_THROWS_AS(interleave_with_gaps(FinSubset({1, 2}), u), InvalidInput);
}

TEST_CASE("path between separated skipped subsets") {
  Universe u = Universe::initial_segment(8);
  auto path = plegma_path_between(FinSubset({1, 3}), FinSubset({5, 7}), u);
  REQUIRE(path.size() == 3);
  CHECK(path[0] == FinSubset({1, 3}));
  CHECK(path[1] == FinSubset({2, 6}));
  CHECK(path[2] == FinSubset({5, 7}));
  for (size_t i = 0; i + 1 < path.size(); ++i)
    CHECK(is_plegma_pair(path[i], path[i + 1]));
}

TEST_CASE("path construction preconditions") {
  Universe u = Universe::initial_segment(12);
  CHECK_THROWS_AS(plegma_path_between(FinSubset({1, 3}), FinSubset({3, 7}), u),
                  InvalidInput);
  CHECK_THROWS_AS(plegma_path_between(FinSubset({1, 2}), FinSubset({5, 7}), u),
                  InvalidInput);
}

TEST_CASE("distance equals coordinate count for separated skipped pairs") {
  Universe u = Universe::initial_segment(10);
  auto d = plegma_distance(FinSubset({1, 3}), FinSubset({5, 7}), u);
  REQUIRE(d.has_value());
  CHECK(*d == 2);
  CHECK(plegma_distance(FinSubset({2, 4}), FinSubset({2, 4}), u) == 0);
}

TEST_CASE("tight subsets have no outgoing steps") {
  Universe u = Universe::initial_segment(10);
  int successors = 0;
  for_each_plegma_successor(FinSubset({1, 2}), u, [&](const FinSubset&) {
    ++successors;
    return true;
  });
  CHECK(successors == 0);
  CHECK_FALSE(plegma_distance(FinSubset({1, 2}), FinSubset({5, 7}), u).has_value());
}

TEST_CASE("no shorter path exists below the coordinate count") {
  Universe u = Universe::initial_segment(8);
  FinSubset s({1, 3}), t({5, 7});
  bool found_shorter = false;
  for_each_plegma_path_upto(s, u, 1, [&](const std::vector<FinSubset>& path) {
    if (path.back() == t) found_shorter = true;
    return !found_shorter;
  });
  CHECK_FALSE(found_shorter);
}

TEST_CASE("map preservation verdicts") {
  Universe u = Universe::initial_segment(4);
  SubsetMap identity, swap12, constant;
  for_each_subset(u, 1, [&](const FinSubset& s) {
    identity[s] = s;
    int x = s.at1(1);
    int y = (x == 1) ? 2 : (x == 2 ? 1 : x);
    swap12[s] = FinSubset({y});
    constant[s] = FinSubset({1});
    return true;
  });
  auto ok = is_plegma_preserving(identity, u, 1);
  CHECK(ok.preserving);
  auto bad = is_plegma_preserving(swap12, u, 1);
  CHECK_FALSE(bad.preserving);
  REQUIRE(bad.counterexample.has_value());
  CHECK(is_plegma(*bad.counterexample));
}

TEST_CASE("sub universes where a map destroys every pair") {
  Universe u = Universe::initial_segment(4);
  SubsetMap swap12, constant;
  for_each_subset(u, 1, [&](const FinSubset& s) {
    int x = s.at1(1);
    int y = (x == 1) ? 2 : (x == 2 ? 1 : x);
    swap12[s] = FinSubset({y});
    constant[s] = FinSubset({1});
    return true;
  });
  // The constant map sends every pair to a repeated singleton: never plegma.
  auto witness = find_nonpreserving_witness(constant, u, 1, 3);
  REQUIRE(witness.has_value());
  CHECK((int)witness->size() == 3);
  // The transposition destroys only pairs touching 1 and 2; any 3 elements
  // contain an untouched pair, so no uniform witness of that size exists.
  CHECK_FALSE(find_nonpreserving_witness(swap12, u, 1, 3).has_value());
  CHECK_THROWS_AS(find_nonpreserving_witness(swap12, u, 1, 1), InvalidInput);
}
