#include <catch2/catch_amalgamated.hpp>

#include "plegma/io.hpp"

using namespace plegma;

TEST_CASE("scalar and index types round-trip through JSON") {
  Rational r(-22, 7);
  CHECK(rational_from_json(to_json(r)) == r);

  FinSubset s{2, 5, 9};
  CHECK(finsubset_from_json(to_json(s)) == s);
  CHECK(finsubset_from_json(to_json(FinSubset{})) == FinSubset{});

  PlegmaTuple t = {FinSubset{1, 3}, FinSubset{2, 4}};
  CHECK(plegma_tuple_from_json(to_json(t)) == t);

  Universe init = Universe::initial_segment(9);
  Universe back = universe_from_json(to_json(init));
  CHECK(back.is_initial_segment());
  CHECK(back.size() == 9);

  Universe evens = Universe::explicit_set({2, 4, 6, 8});
  CHECK(universe_from_json(to_json(evens)).elements() == evens.elements());
}

TEST_CASE("sparse vectors round-trip with exact coefficients") {
  IntVec x;
  x.set(3, Rational(1, 3));
  x.set(100, Rational(-7, 2));
  CHECK(intvec_from_json(to_json(x)) == x);

  SubsetVec y;
  y.set(FinSubset{1, 2}, Rational(2, 5));
  y.set(FinSubset{3, 7}, Rational(-1));
  CHECK(subsetvec_from_json(to_json(y)) == y);
}

TEST_CASE("engine configs and certificates serialize faithfully") {
  TsirelsonConfig cfg = TsirelsonConfig::preset("standard");
  TsirelsonConfig cback = tsirelson_config_from_json(to_json(cfg));
  CHECK(cback.m == cfg.m);
  CHECK(cback.n == cfg.n);

  SubsetVec x;
  x.set(FinSubset{1, 3}, Rational(1));
  x.set(FinSubset{2, 4}, Rational(1));
  DualCertificate cert = norming_functional(x);
  json j = to_json(cert);
  CHECK(j.at("scale").get<std::string>() == cert.scale.to_string());
  CHECK(j.at("families").size() == cert.families.size());

  IntVec v;
  for (int i = 1; i <= 6; ++i) v.set(i, Rational(1));
  TsirelsonCertificate tc = tsirelson_certificate(v, cfg);
  json tj = to_json(tc);
  CHECK(tj.at("nodes").size() == tc.nodes.size());
  CHECK(tj.at("positions").get<std::vector<int>>() == tc.positions);
}

TEST_CASE("CSV output is canonical and survives its own parser") {
  std::string csv = csv_table({"a", "b"}, {{"1", "plain"}, {"2", "with,comma"},
                                           {"3", "with \"quote\""}});
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 4u);
  CHECK(rows[0] == std::vector<std::string>{"a", "b"});
  CHECK(rows[2] == std::vector<std::string>{"2", "with,comma"});
  CHECK(rows[3] == std::vector<std::string>{"3", "with \"quote\""});

  // Byte stability: the same table renders identically.
  CHECK(csv == csv_table({"a", "b"}, {{"1", "plain"}, {"2", "with,comma"},
                                      {"3", "with \"quote\""}}));
}

TEST_CASE("double representation is stable and round-trips") {
  CHECK(double_repr(1.0) == "1");
  CHECK(double_repr(0.5) == "0.5");
  double v = 0.1 + 0.2;
  CHECK(std::stod(double_repr(v)) == v);
}

TEST_CASE("SVG charts are deterministic and reject empty data") {
  std::string csv = csv_table({"n", "value"}, {{"1", "0.5"}, {"2", "0.25"}, {"3", "0.2"}});
  std::string svg = svg_chart_from_csv(csv, 0, {1}, "decay");
  CHECK(svg.find("<svg") == 0u);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg == svg_chart_from_csv(csv, 0, {1}, "decay"));

  std::string empty = csv_table({"n", "value"}, {});
  CHECK_THROWS_AS(svg_chart_from_csv(empty, 0, {1}, "x"), InvalidInput);
}

TEST_CASE("tabular writers cover the lab result types") {
  // A tiny spreading-model estimate, rendered and re-parsed.
  SMEstimate est;
  est.l = 2;
  est.m = 2;
  est.tuple_count = 5;
  CoeffStats row;
  row.coeffs = {Rational(1), Rational(-1)};
  row.min_value = 1.0;
  row.max_value = 1.0;
  row.mean_value = 1.0;
  row.count = 5;
  est.rows.push_back(row);
  std::string csv = sm_estimate_csv(est);
  auto parsed = parse_csv(csv);
  REQUIRE(parsed.size() == 2u);
  CHECK(parsed[0][0] == "l");
  CHECK(parsed[1][2] == "1 -1");
  CHECK(parsed[1][6] == "0");  // width

  StabilizeResult st;
  st.rows.push_back({1, 0.125, 0.2, true, 6});
  CHECK(parse_csv(stabilize_csv(st))[1][3] == "yes");
}
