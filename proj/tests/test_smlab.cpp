#include <catch2/catch_amalgamated.hpp>

#include "plegma/schreier_norm.hpp"
#include "plegma/seq.hpp"
#include "plegma/smlab.hpp"

using namespace plegma;

namespace {

KSeq<int> unit_1seq() {
  KSeq<int> s;
  s.k = 1;
  s.name = "unit1";
  s.engine = std::make_shared<C0Engine>();
  s.at = [](const FinSubset& t) { return IntVec::unit(t.at1(1)); };
  return s;
}

// c_0 1-sequence with a decaying perturbation: x_(n) = (1 + 1/n) e_n.
// Its norms settle only once the admissibility floor moves out.
KSeq<int> decaying_1seq() {
  KSeq<int> s;
  s.k = 1;
  s.name = "decaying1";
  s.engine = std::make_shared<C0Engine>();
  s.at = [](const FinSubset& t) {
    int n = t.at1(1);
    IntVec v;
    v.set(n, Rational(1) + Rational(1, n));
    return v;
  };
  return s;
}

std::vector<Rational> coeffs(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(Rational::parse(x));
  return out;
}

}  // namespace

TEST_CASE("coefficient nets have the expected sizes and normalizations") {
  auto sup = sup_ball_grid(2, 1);
  CHECK(sup.size() == 8u);  // 3^2 minus the zero tuple

  auto sphere = l1_sphere_grid(2, 4);
  CHECK(sphere.size() == 16u);
  for (const auto& row : sphere) {
    Rational total(0);
    for (const Rational& c : row) total += c.abs();
    CHECK(total == Rational(1));
  }
}

TEST_CASE("summing differences have constant value one across all tuples") {
  auto x = summing_2seq();
  SMOptions opt;
  opt.horizon = 12;
  SMEstimate est =
      empirical_sm(x, Universe::initial_segment(12), 1, 2, {coeffs({"1", "-1"})}, opt);
  REQUIRE(est.has_tuples());
  const CoeffStats& row = est.rows[0];
  CHECK(row.min_value == 1.0);
  CHECK(row.max_value == 1.0);
  CHECK(row.width() == 0.0);
  CHECK(row.count == est.tuple_count);
}

TEST_CASE("subset basis pairs past the floor are exactly l1") {
  auto x = basis_seq(2, std::make_shared<SchreierEngine>());
  SMOptions opt;
  opt.horizon = 8;
  Universe m = Universe::initial_segment(12);
  SMEstimate est = empirical_sm(x, m, 2, 2, {coeffs({"1", "1"}), coeffs({"1/2", "-1/2"})}, opt);
  REQUIRE(est.has_tuples());
  // Tuples start at M(2) = 2 >= family size, so the whole support is one
  // admissible family and the norm is the l1 mass of the coefficients.
  CHECK(est.rows[0].min_value == 2.0);
  CHECK(est.rows[0].max_value == 2.0);
  CHECK(est.rows[1].min_value == 1.0);
  CHECK(est.rows[1].max_value == 1.0);
}

TEST_CASE("sampled estimates are deterministic and stay inside the exhaustive envelope") {
  auto x = summing_2seq();
  Universe m = Universe::initial_segment(14);
  auto grid = sup_ball_grid(2, 1);

  SMOptions ex;
  ex.horizon = 14;
  SMEstimate full = empirical_sm(x, m, 1, 2, grid, ex);

  SMOptions sm;
  sm.horizon = 14;
  sm.mode = SampleMode::kSampled;
  sm.seed = 99;
  sm.samples = 40;
  SMEstimate a = empirical_sm(x, m, 1, 2, grid, sm);
  SMEstimate b = empirical_sm(x, m, 1, 2, grid, sm);
  REQUIRE(a.has_tuples());
  for (size_t r = 0; r < grid.size(); ++r) {
    CHECK(a.rows[r].min_value == b.rows[r].min_value);  // same seed, same draw
    CHECK(a.rows[r].max_value == b.rows[r].max_value);
    CHECK(a.rows[r].min_value >= full.rows[r].min_value);
    CHECK(a.rows[r].max_value <= full.rows[r].max_value);
  }
}

TEST_CASE("enlarging the horizon never shrinks the observed envelope") {
  auto x = summing_2seq();
  Universe m = Universe::initial_segment(16);
  auto grid = sup_ball_grid(2, 1);
  SMOptions small;
  small.horizon = 8;
  SMOptions large;
  large.horizon = 16;
  SMEstimate s = empirical_sm(x, m, 1, 2, grid, small);
  SMEstimate l = empirical_sm(x, m, 1, 2, grid, large);
  for (size_t r = 0; r < grid.size(); ++r) {
    CHECK(l.rows[r].min_value <= s.rows[r].min_value);
    CHECK(l.rows[r].max_value >= s.rows[r].max_value);
  }
}

TEST_CASE("the exhaustive cap triggers a scale refusal, not a silent truncation") {
  auto x = summing_2seq();
  SMOptions opt;
  opt.horizon = 30;
  opt.tuple_cap = 100;
  CHECK_THROWS_AS(
      empirical_sm(x, Universe::initial_segment(30), 1, 3, {coeffs({"1", "1", "1"})}, opt),
      ScaleRefusal);
}

TEST_CASE("stabilization thins the universe until the decaying perturbation settles") {
  auto x = decaying_1seq();
  SMOptions opt;
  opt.horizon = 30;
  StabilizeResult res = sm_stabilize(x, {0.15}, 1, opt, 1);
  REQUIRE(res.rows.size() == 1u);
  CHECK(res.rows[0].stabilized);
  CHECK(res.rows[0].worst_width <= 0.15);
  // Triangular picks 1,2,4,7,11,16,22,29 lose their head until 1/M(1) - 1/29
  // fits the budget: M = {7, 11, 16, 22, 29}.
  CHECK(res.m.elements() == std::vector<int>{7, 11, 16, 22, 29});
  CHECK(res.complete);
}

TEST_CASE("stabilization flags a level when the universe runs out first") {
  auto x = decaying_1seq();
  SMOptions opt;
  opt.horizon = 10;  // picks 1,2,4,7: too short to reach width 0.01
  StabilizeResult res = sm_stabilize(x, {0.01}, 1, opt, 1);
  REQUIRE(res.rows.size() == 1u);
  CHECK(!res.rows[0].stabilized);
  CHECK(!res.complete);
}

TEST_CASE("l1 constant of the subset basis is 1 and of the unit basis is 1/2") {
  SMOptions opt;
  opt.horizon = 7;
  auto basis = basis_seq(2, std::make_shared<SchreierEngine>());
  L1ConstantResult c = l1_constant(basis, Universe::initial_segment(10), 2, 4, opt);
  CHECK(c.value == 1.0);

  auto unit = unit_1seq();
  SMOptions opt1;
  opt1.horizon = 8;
  L1ConstantResult cu = l1_constant(unit, Universe::initial_segment(10), 2, 4, opt1);
  CHECK(cu.value == 0.5);
  CHECK(cu.witness == coeffs({"1/2", "1/2"}));
}

TEST_CASE("splitting diagnostics: constant second part gives exact zero-sum equality") {
  auto x1 = unit_1seq();

  KSeq<int> x2;  // constant sequence: always e_100
  x2.k = 1;
  x2.name = "const";
  x2.engine = x1.engine;
  x2.at = [](const FinSubset&) { return IntVec::unit(100); };

  KSeq<int> x;
  x.k = 1;
  x.name = "whole";
  x.engine = x1.engine;
  auto f1 = x1.at;
  auto f2 = x2.at;
  x.at = [f1, f2](const FinSubset& s) { return f1(s) + f2(s); };

  SMOptions opt;
  opt.horizon = 8;
  SplitReport rep = splitting_check(x, x1, x2, Universe::initial_segment(10), 2, 2, opt);
  CHECK(rep.triangle_ok);
  REQUIRE(rep.zero_sum_exact.has_value());
  CHECK(*rep.zero_sum_exact);
  CHECK(rep.part1.value == 0.5);
  CHECK(rep.part2.value == 0.0);   // (1/2, -1/2) cancels the constant part
  CHECK(rep.whole.value == 0.5);

  // Violating additivity is an input error, not a statistic.
  KSeq<int> wrong = x;
  wrong.at = [f1](const FinSubset& s) { return f1(s); };
  CHECK_THROWS_AS(splitting_check(wrong, x1, x2, Universe::initial_segment(10), 2, 2, opt),
                  InvalidInput);
}

TEST_CASE("Cesaro mean of the pair basis at n = 3 is the normalized triangle") {
  auto basis = basis_seq(2, std::make_shared<SchreierEngine>());
  Universe m = Universe::initial_segment(12);
  SubsetVec mean = cesaro_mean(basis, m, 3);
  SubsetVec expect;
  expect.set(FinSubset{1, 2}, Rational(1, 3));
  expect.set(FinSubset{1, 3}, Rational(1, 3));
  expect.set(FinSubset{2, 3}, Rational(1, 3));
  CHECK(mean == expect);

  auto sq = schreier_norm(mean).square;
  CHECK(sq == Rational(1, 3));  // norm sqrt(3)/3

  CHECK_THROWS_AS(cesaro_mean(basis, m, 1), InvalidInput);  // n below the arity
}

TEST_CASE("functional scan pins the product-family values and the limit constant") {
  auto basis = basis_seq(2, std::make_shared<SchreierEngine>());
  Universe m = Universe::initial_segment(12);
  CesaroScan scan = cesaro_scan(basis, m, 1, 3, true);
  CHECK(scan.limit_constant == Rational(2, 9));
  REQUIRE(scan.rows.size() == 3u);
  for (const CesaroRow& row : scan.rows) {
    REQUIRE(row.functional.has_value());
    REQUIRE(row.analytic.has_value());
    CHECK(*row.functional == *row.analytic);
  }
  CHECK(*scan.rows[0].functional == Rational(1, 3));
  CHECK(*scan.rows[1].functional == Rational(4, 15));
  CHECK(*scan.rows[2].functional == Rational(1, 4));
  // The n = 1 mean has 3 support points (norm computable); by n = 2 the mean
  // support exceeds the exact-engine cap and the norm is reported absent.
  CHECK(scan.rows[0].norm_lo.has_value());
  CHECK(!scan.rows[1].norm_lo.has_value());
}

TEST_CASE("plain scan reports norms of Cesaro means for coordinate sequences") {
  auto x = unit_1seq();
  Universe m = Universe::initial_segment(8);
  CesaroScan scan = cesaro_scan(x, m, 1, 4);
  REQUIRE(scan.rows.size() == 4u);
  // Mean over n singletons is (e_1 + ... + e_n)/n with sup norm 1/n.
  for (int n = 1; n <= 4; ++n) {
    REQUIRE(scan.rows[n - 1].norm_lo.has_value());
    CHECK(*scan.rows[n - 1].norm_lo == Rational(1, n).to_double());
    CHECK(!scan.rows[n - 1].functional.has_value());
  }
}

TEST_CASE("measured basis constant of the l2 ambient is one") {
  L2Engine eng;
  double c = measured_basis_constant(eng, 10);
  CHECK(c >= 1.0);
  CHECK(c <= 1.0 + 1e-9);
}
