#include <catch2/catch_amalgamated.hpp>

#include "plegma/fin_subset.hpp"

using namespace plegma;

TEST_CASE("fin subset validation") {
  CHECK_NOTHROW(FinSubset({1, 3, 7}));
  CHECK_THROWS_AS(FinSubset({3, 1}), InvalidInput);
  CHECK_THROWS_AS(FinSubset({1, 1}), InvalidInput);
  CHECK_THROWS_AS(FinSubset({0, 2}), InvalidInput);
  CHECK_THROWS_AS(FinSubset({-1}), InvalidInput);
}

TEST_CASE("fin subset accessors") {
  FinSubset s({2, 5, 9});
  CHECK(s.size() == 3);
  CHECK(s.at1(1) == 2);
  CHECK(s.at1(3) == 9);
  CHECK_THROWS_AS(s.at1(0), InvalidInput);
  CHECK_THROWS_AS(s.at1(4), InvalidInput);
  CHECK(s.min() == 2);
  CHECK(s.max() == 9);
  CHECK(s.contains(5));
  CHECK_FALSE(s.contains(4));
  CHECK(s.to_string() == "(2,5,9)");
}

TEST_CASE("fin subset derived sets") {
  FinSubset s({2, 5, 9});
  CHECK(s.prefix(2) == FinSubset({2, 5}));
  CHECK(s.drop_max() == FinSubset({2, 5}));
  CHECK(s.with(7) == FinSubset({2, 5, 7, 9}));
  CHECK_THROWS_AS(s.with(5), InvalidInput);
  CHECK(s.at_positions({1, 3}) == FinSubset({2, 9}));
}

TEST_CASE("block order between subsets") {
  CHECK(FinSubset::before(FinSubset({1, 2}), FinSubset({3, 4})));
  CHECK_FALSE(FinSubset::before(FinSubset({1, 3}), FinSubset({3, 4})));
  CHECK_FALSE(FinSubset::before(FinSubset({1, 4}), FinSubset({2, 5})));
}

TEST_CASE("universe forms") {
  Universe u = Universe::initial_segment(5);
  CHECK(u.size() == 5);
  CHECK(u.is_initial_segment());
  CHECK(u.at1(3) == 3);
  CHECK(u.contains(5));
  CHECK_FALSE(u.contains(6));

  Universe w = Universe::explicit_set({2, 5, 9});
  CHECK(w.size() == 3);
  CHECK_FALSE(w.is_initial_segment());
  CHECK(w.at1(2) == 5);
  CHECK(w.index_of(9) == 3);
  CHECK_FALSE(w.index_of(4).has_value());
  CHECK(w.first_between(2, 9) == 5);
  CHECK_FALSE(w.first_between(5, 9).has_value());
  CHECK(w.contains_subset(FinSubset({2, 9})));
  CHECK_FALSE(w.contains_subset(FinSubset({2, 3})));
}

TEST_CASE("subset enumeration is lexicographic") {
  std::vector<std::string> got;
  for_each_subset(Universe::initial_segment(4), 2, [&](const FinSubset& s) {
    got.push_back(s.to_string());
    return true;
  });
  std::vector<std::string> want = {"(1,2)", "(1,3)", "(1,4)",
                                   "(2,3)", "(2,4)", "(3,4)"};
  CHECK(got == want);
}

TEST_CASE("subset enumeration early stop") {
  int count = 0;
  for_each_subset(Universe::initial_segment(6), 2, [&](const FinSubset&) {
    return ++count < 4;
  });
  CHECK(count == 4);
}

TEST_CASE("subset enumeration counts match binomials") {
  for (int n = 1; n <= 7; ++n)
    for (int k = 1; k <= n; ++k) {
      long long count = 0;
      for_each_subset(Universe::initial_segment(n), k, [&](const FinSubset&) {
        ++count;
        return true;
      });
      CHECK(count == binomial(n, k));
    }
}

TEST_CASE("binomial values and overflow") {
  CHECK(binomial(6, 4) == 15);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(4, 5) == 0);
  CHECK(binomial(52, 5) == 2598960);
  CHECK_THROWS_AS(binomial(80, 40), std::overflow_error);
}
