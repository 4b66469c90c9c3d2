#include <catch2/catch_amalgamated.hpp>

#include "plegma/tsirelson.hpp"

using namespace plegma;

namespace {

IntVec vec(std::vector<std::pair<int, Rational>> entries) {
  IntVec x;
  for (auto& [i, v] : entries) x.add(i, v);
  return x;
}

// Small config whose first piece budget is tiny, so genuine splits happen
// already on supports of a handful of points.
TsirelsonConfig tiny_config() { return {{10, 100}, {2, 21}}; }

}  // namespace

TEST_CASE("config presets and validation") {
  CHECK_NOTHROW(TsirelsonConfig::preset("standard").validate());
  CHECK_NOTHROW(TsirelsonConfig::preset("steep").validate());
  CHECK_THROWS_AS(TsirelsonConfig::preset("bad-budget").validate(), InvalidInput);
  CHECK_THROWS_AS(TsirelsonConfig::preset("nonsense"), InvalidInput);
  CHECK_NOTHROW(tiny_config().validate());

  TsirelsonConfig bad1{{100, 10}, {100, 10000}};
  CHECK_THROWS_AS(bad1.validate(), InvalidInput);
  TsirelsonConfig bad2{{10, 100}, {100, 200}};  // needs n2 > m1*n1
  CHECK_THROWS_AS(bad2.validate(), InvalidInput);
  TsirelsonConfig bad3{{10}, {1}};
  CHECK_THROWS_AS(bad3.validate(), InvalidInput);
  TsirelsonConfig bad4{{10, 100}, {100}};
  CHECK_THROWS_AS(bad4.validate(), InvalidInput);

  CHECK(TsirelsonConfig::preset("standard").budget() == Rational(111, 1000));
  CHECK(TsirelsonConfig::preset("standard").tail_slack() == Rational(1, 9000));
}

TEST_CASE("unit vectors have norm exactly one") {
  auto cfg = TsirelsonConfig::preset("standard");
  for (int i : {1, 7, 500}) {
    auto r = tsirelson_norm(vec({{i, Rational(1)}}), cfg);
    CHECK(r.lo == 1.0);
    CHECK(r.hi == 1.0);
  }
}

TEST_CASE("hundred point plateau under the standard parameters") {
  IntVec x;
  for (int q = 1; q <= 100; ++q) x.add(q, Rational(1));
  auto r = tsirelson_norm(x, TsirelsonConfig::preset("standard"));
  CHECK(r.lo == Catch::Approx(std::sqrt(101.01)).epsilon(1e-12));
  CHECK(r.hi >= r.lo);
  CHECK(r.hi - r.lo < 1e-4);
}

TEST_CASE("norm is unconditional and monotone under suppression") {
  auto cfg = tiny_config();
  auto x = vec({{1, Rational(2)}, {3, Rational(-1)}, {4, Rational(1, 2)},
                {9, Rational(1)}});
  auto flipped = vec({{1, Rational(2)}, {3, Rational(1)}, {4, Rational(-1, 2)},
                      {9, Rational(-1)}});
  auto rx = tsirelson_norm(x, cfg);
  auto rf = tsirelson_norm(flipped, cfg);
  CHECK(rx.lo == rf.lo);
  CHECK(rx.hi == rf.hi);

  auto dropped = vec({{1, Rational(2)}, {4, Rational(1, 2)}, {9, Rational(1)}});
  CHECK(tsirelson_norm(dropped, cfg).lo <= rx.lo + 1e-12);
}

TEST_CASE("bottom up tables equal the literal fixed point") {
  auto cfg = tiny_config();
  std::vector<IntVec> cases = {
      vec({{1, Rational(1)}, {2, Rational(1)}, {3, Rational(1)}}),
      vec({{1, Rational(1)}, {2, Rational(-2)}, {5, Rational(3)},
           {6, Rational(1, 2)}, {9, Rational(1)}}),
      vec({{2, Rational(1, 3)}, {3, Rational(1, 3)}, {4, Rational(1, 3)},
           {5, Rational(1, 3)}, {6, Rational(1, 3)}, {7, Rational(1, 3)}}),
      vec({{1, Rational(5)}, {2, Rational(4)}, {3, Rational(3)},
           {4, Rational(2)}, {5, Rational(1)}, {6, Rational(1)},
           {7, Rational(2)}, {8, Rational(3)}}),
  };
  for (auto& x : cases) {
    double iterated = tsirelson_fixed_point_iterate(x, cfg);
    double direct = tsirelson_norm(x, cfg).lo;
    CHECK(iterated == Catch::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("enclosures always bracket and stay ordered") {
  auto cfg = TsirelsonConfig::preset("steep");
  auto x = vec({{1, Rational(1)}, {2, Rational(1)}, {3, Rational(1)},
                {10, Rational(-4)}, {11, Rational(1, 7)}});
  auto r = tsirelson_norm(x, cfg);
  CHECK(r.lo <= r.hi);
  CHECK(r.lo >= x.linf().to_double());
  CHECK(r.hi <= x.l1().to_double() + 1e-12);
}

TEST_CASE("certificates verify and detect tampering") {
  auto cfg = tiny_config();
  auto x = vec({{1, Rational(1)}, {2, Rational(-2)}, {5, Rational(3)},
                {6, Rational(1, 2)}, {9, Rational(1)}, {12, Rational(2)}});
  auto cert = tsirelson_certificate(x, cfg);
  std::string why;
  CHECK(verify_tsirelson_certificate(cert, x, &why));
  CHECK(cert.lo == Catch::Approx(tsirelson_norm(x, cfg).lo));

  auto bad = cert;
  bad.nodes[0].value += 0.05;
  bad.lo += 0.05;
  CHECK_FALSE(verify_tsirelson_certificate(bad, x, &why));
  CHECK_FALSE(why.empty());

  auto wrong_vec = x;
  wrong_vec.add(30, Rational(1));
  CHECK_FALSE(verify_tsirelson_certificate(cert, wrong_vec, &why));
}

TEST_CASE("scale refusals") {
  auto cfg = TsirelsonConfig::preset("standard");
  IntVec big;
  for (int i = 1; i <= 601; ++i) big.add(i, Rational(1));
  CHECK_THROWS_AS(tsirelson_norm(big, cfg), ScaleRefusal);

  IntVec tall;
  for (int i = 1; i <= 9; ++i) tall.add(i, Rational(1));
  CHECK_NOTHROW(tsirelson_norm(tall, cfg, 600, 1e9));
  CHECK_THROWS_AS(tsirelson_norm(tall, tiny_config(), 600, 1.0), ScaleRefusal);
}

TEST_CASE("engine interface") {
  TsirelsonEngine eng(TsirelsonConfig::preset("standard"));
  CHECK(eng.name() == "tsirelson");
  auto v = eng.norm(vec({{4, Rational(1)}}));
  CHECK(v.lo == 1.0);
  CHECK(v.hi == 1.0);
  CHECK_THROWS_AS(TsirelsonEngine(TsirelsonConfig::preset("bad-budget")), InvalidInput);
}
