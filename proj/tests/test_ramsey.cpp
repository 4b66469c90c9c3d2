#include <catch2/catch_amalgamated.hpp>

#include "plegma/ramsey.hpp"

using namespace plegma;

TEST_CASE("monochromatize finds the least uniform sub universe") {
  // Color a pair by the parity of its gap; same-parity triples must have all
  // gaps even, and the least such triple is 1,3,5.
  Universe u = Universe::initial_segment(6);
  TupleColoring parity = [](const PlegmaTuple& t) {
    return (t[1].at1(1) - t[0].at1(1)) % 2;
  };
  auto found = monochromatize(u, 1, 2, parity, 3);
  REQUIRE(found.has_value());
  CHECK(*found == std::vector<int>({1, 3, 5}));

  CHECK_FALSE(monochromatize(u, 1, 2, parity, 5).has_value());
  CHECK_THROWS_AS(monochromatize(u, 1, 2, parity, 1), InvalidInput);
}

TEST_CASE("monochromatize on width two tuples") {
  // Flats have four points; color by whether the flat is an initial run.
  Universe u = Universe::initial_segment(6);
  TupleColoring c = [](const PlegmaTuple& t) {
    FinSubset f = flat_from_plegma(t);
    return (f.max() - f.min() == 3) ? 1 : 0;
  };
  auto found = monochromatize(u, 2, 2, c, 5);
  REQUIRE(found.has_value());
  Universe sub = Universe::explicit_set(*found);
  std::optional<int> color_seen;
  for_each_plegma(sub, 2, 2, [&](const PlegmaTuple& t) {
    int col = c(t);
    if (!color_seen) color_seen = col;
    CHECK(col == *color_seen);
    return true;
  });
}

TEST_CASE("dichotomy prefers the larger alternative") {
  Universe u = Universe::initial_segment(6);

  SubsetLabeling constant = [](const FinSubset&) { return 7; };
  auto a = dichotomy_search(u, 1, constant);
  CHECK(a.kind == DichotomyResult::Kind::kConstant);
  CHECK((int)a.sub_universe.size() == 6);
  CHECK(a.label == 7);

  SubsetLabeling injective = [](const FinSubset& s) { return s.at1(1); };
  auto b = dichotomy_search(u, 1, injective);
  CHECK(b.kind == DichotomyResult::Kind::kInjectiveOnPlegmaPairs);
  CHECK((int)b.sub_universe.size() == 6);
}

TEST_CASE("tuple search inside explicit collections") {
  std::vector<FinSubset> a = {FinSubset({1, 2}), FinSubset({1, 3}), FinSubset({2, 4})};
  auto found = find_plegma_in_subset(a, 2);
  REQUIRE(found.has_value());
  CHECK((*found)[0] == FinSubset({1, 3}));
  CHECK((*found)[1] == FinSubset({2, 4}));

  std::vector<FinSubset> blocks = {FinSubset({1, 2}), FinSubset({3, 4})};
  CHECK_FALSE(find_plegma_in_subset(blocks, 2).has_value());
  CHECK_THROWS_AS(find_plegma_in_subset({FinSubset({1}), FinSubset({1, 2})}, 2),
                  InvalidInput);
}

TEST_CASE("largest tuple free collections, frozen small values") {
  // No plegma pair exists among the 2-subsets of {1,2,3}.
  CHECK(largest_plegma_free(3, 2, 2).size == 3);
  // Exactly one plegma pair exists on {1..4}; removing one endpoint frees it.
  CHECK(largest_plegma_free(4, 2, 2).size == 5);
  // Singletons: every increasing pair is plegma.
  CHECK(largest_plegma_free(5, 1, 2).size == 1);
  CHECK(largest_plegma_free(5, 1, 3).size == 2);
  // The pair graph on {1..5} is five isolated vertices plus a five cycle.
  CHECK(largest_plegma_free(5, 2, 2).size == 7);
}

TEST_CASE("free set witnesses verify") {
  auto r = largest_plegma_free(5, 2, 2);
  CHECK((int)r.witness.size() == r.size);
  CHECK_FALSE(find_plegma_in_subset(r.witness, 2).has_value());

  auto r3 = largest_plegma_free(6, 2, 3);
  CHECK_FALSE(find_plegma_in_subset(r3.witness, 3).has_value());
}

TEST_CASE("scale refusal on oversized vertex sets") {
  CHECK_THROWS_AS(largest_plegma_free(30, 3, 2), ScaleRefusal);
}

TEST_CASE("density thresholds for singleton width match the closed form") {
  for (int l = 2; l <= 5; ++l)
    for (auto& d : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(1)}) {
      auto scan = density_threshold_scan(1, l, d, 40);
      REQUIRE(scan.threshold_n.has_value());
      long long expect = (Rational(l) / d).ceil();
      CHECK(*scan.threshold_n == expect);
    }
}

TEST_CASE("density scan rows and counterexamples are coherent") {
  auto scan = density_threshold_scan(1, 3, Rational(1, 2), 40);
  REQUIRE(scan.threshold_n.has_value());
  CHECK(*scan.threshold_n == 6);
  // Rows below the threshold are witnessed by a free set meeting the bound.
  REQUIRE_FALSE(scan.counterexample.empty());
  CHECK_FALSE(find_plegma_in_subset(scan.counterexample, 3).has_value());
  const DensityRow& last_below = scan.rows[scan.rows.size() - 2];
  CHECK((long long)scan.counterexample.size() == last_below.bound.floor());
  CHECK_THROWS_AS(density_threshold_scan(1, 2, Rational(3, 2), 10), InvalidInput);
}
