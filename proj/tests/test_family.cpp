#include <catch2/catch_amalgamated.hpp>

#include "plegma/family.hpp"

using namespace plegma;

TEST_CASE("canonical family form") {
  Family f = canonical_family({FinSubset({2, 4}), FinSubset({1, 3}), FinSubset({2, 4})});
  REQUIRE(f.size() == 2);
  CHECK(f[0] == FinSubset({1, 3}));
  CHECK(f[1] == FinSubset({2, 4}));
  CHECK_THROWS_AS(canonical_family({}), InvalidInput);
  CHECK_THROWS_AS(canonical_family({FinSubset({1}), FinSubset({1, 2})}), InvalidInput);
}

TEST_CASE("column extraction") {
  auto cols = family_columns({FinSubset({1, 4}), FinSubset({2, 4})});
  REQUIRE(cols.size() == 2);
  CHECK(cols[0] == std::set<int>({1, 2}));
  CHECK(cols[1] == std::set<int>({4}));
}

TEST_CASE("known feasible and infeasible families") {
  // Interlaced pair: blocks {1,2} {3,4} work, but the first block starts too low
  // for the size bound.
  Family interlaced = {FinSubset({1, 3}), FinSubset({2, 4})};
  CHECK(is_plegmatic(interlaced, FeasibilityMode::kExact));
  CHECK_FALSE(is_schreier_plegmatic(interlaced, FeasibilityMode::kExact));

  // Shifted by one: {2,3} {4,5} satisfies the size bound.
  Family shifted = {FinSubset({2, 4}), FinSubset({3, 5})};
  CHECK(is_schreier_plegmatic(shifted, FeasibilityMode::kExact));

  // Shared first coordinate: the first column must fit strictly below the
  // second column's minimum and there is no room.
  Family shared = {FinSubset({1, 2}), FinSubset({1, 3})};
  CHECK_FALSE(is_plegmatic(shared, FeasibilityMode::kExact));

  // Overlapping columns can never be separated.
  Family overlapping = {FinSubset({1, 3}), FinSubset({3, 5})};
  CHECK_FALSE(is_plegmatic(overlapping, FeasibilityMode::kExact));

  // Singletons are always fine.
  CHECK(is_schreier_plegmatic({FinSubset({1, 5})}, FeasibilityMode::kExact));
}

TEST_CASE("witness blocks validate independently") {
  Family fam = {FinSubset({2, 4}), FinSubset({3, 5})};
  auto w = plegmatic_blocks(fam, true, FeasibilityMode::kGreedy);
  REQUIRE(w.feasible);
  CHECK(blocks_cover_family(fam, w.blocks, true));

  auto w2 = plegmatic_blocks(fam, true, FeasibilityMode::kExact);
  REQUIRE(w2.feasible);
  CHECK(blocks_cover_family(fam, w2.blocks, true));
}

TEST_CASE("greedy feasibility agrees with bounded exhaustive search") {
  // All families of two or three 2-subsets drawn from {1..6}.
  std::vector<FinSubset> pool;
  for_each_subset(Universe::initial_segment(6), 2, [&](const FinSubset& s) {
    pool.push_back(s);
    return true;
  });
  int disagreements = 0, feasible_seen = 0;
  auto check_family = [&](const Family& fam) {
    for (bool schreier : {false, true}) {
      auto greedy = plegmatic_blocks(fam, schreier, FeasibilityMode::kGreedy);
      auto exact = plegmatic_blocks(fam, schreier, FeasibilityMode::kExact);
      if (greedy.feasible != exact.feasible) ++disagreements;
      if (greedy.feasible) {
        ++feasible_seen;
        CHECK(blocks_cover_family(fam, greedy.blocks, schreier));
      }
      if (exact.feasible) CHECK(blocks_cover_family(fam, exact.blocks, schreier));
    }
  };
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = i + 1; j < pool.size(); ++j) {
      check_family({pool[i], pool[j]});
      for (size_t r = j + 1; r < pool.size(); ++r)
        check_family({pool[i], pool[j], pool[r]});
    }
  CHECK(disagreements == 0);
  CHECK(feasible_seen > 0);
}

TEST_CASE("weakly linked family paths") {
  // Each set in a group must be reachable from the previous group through a
  // feasible two-member family.
  std::vector<std::vector<FinSubset>> good = {
      {FinSubset({2, 4})},
      {FinSubset({3, 5})},
  };
  CHECK(is_weakly_plegmatic_path(good));

  std::vector<std::vector<FinSubset>> bad = {
      {FinSubset({1, 3})},
      {FinSubset({3, 5})},
  };
  CHECK_FALSE(is_weakly_plegmatic_path(bad));

  CHECK_THROWS_AS(is_weakly_plegmatic_path({}), InvalidInput);
}
