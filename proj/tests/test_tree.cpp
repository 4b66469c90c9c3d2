#include <catch2/catch_amalgamated.hpp>

#include "plegma/io.hpp"
#include "plegma/tree.hpp"

using namespace plegma;

namespace {

// Hand-built depth-1 tree map over {1..3}: phi({}) = e_1, each singleton adds
// a clean spike at 10*i.  Already in canonical position, nothing to trim.
TreeMap spike_map() {
  TreeMap tm;
  tm.k = 1;
  tm.m = Universe::initial_segment(3);
  IntVec root = IntVec::unit(1);
  tm.node[FinSubset{}] = root;
  for (int i = 1; i <= 3; ++i) tm.node[FinSubset{i}] = root + IntVec::unit(10 * i);
  return tm;
}

}  // namespace

TEST_CASE("tree differences isolate what each node adds") {
  TreeMap tm = spike_map();
  auto w = tree_differences(tm);
  CHECK(w.at(FinSubset{}) == IntVec::unit(1));
  CHECK(w.at(FinSubset{2}) == IntVec::unit(20));
  CHECK(w.size() == 4u);
}

TEST_CASE("tree map validation catches missing nodes") {
  TreeMap tm = spike_map();
  CHECK_NOTHROW(tm.validate());
  tm.node.erase(FinSubset{2});
  CHECK_THROWS_AS(tm.validate(), InvalidInput);
}

TEST_CASE("extraction keeps clean spikes exactly and reports zero error") {
  TreeMap tm = spike_map();
  L1Engine eng;
  ExtractParams params;
  params.target_size = 3;
  ExtractResult res = canonical_tree_extract(tm, eng, params);
  REQUIRE(res.complete);
  CHECK(res.ctd.l.elements() == std::vector<int>{1, 2, 3});
  CHECK(res.ctd.piece(FinSubset{2}) == IntVec::unit(20));
  CHECK(res.ctd.approx(FinSubset{2}) == tm.at(FinSubset{2}));
  for (const BranchError& row : res.branch_errors) {
    CHECK(row.achieved == 0.0);
    CHECK(row.achieved < row.claimed.to_double());
  }
  CHECK(verify_ctd(res.ctd).ok);
}

TEST_CASE("extraction trims geometric tails within the scheduled budget") {
  LayeredTreeParams p;
  p.k = 2;
  p.universe_size = 5;
  p.seed = 42;
  TreeMap tm = layered_tree_map(p);
  tm.validate();

  L1Engine eng;
  ExtractParams params;
  params.target_size = 5;
  ExtractResult res = canonical_tree_extract(tm, eng, params);
  REQUIRE(res.complete);
  REQUIRE(!res.branch_errors.empty());
  for (const BranchError& row : res.branch_errors) {
    CHECK(row.achieved < row.claimed.to_double());
    // Tails were actually trimmed: the approximant differs from the value.
    CHECK(row.s.size() == 2);
  }
  CtdReport rep = verify_ctd(res.ctd);
  INFO(rep.violation);
  CHECK(rep.ok);

  // At least one branch has a strictly positive achieved error (the tail).
  bool some_positive = false;
  for (const BranchError& row : res.branch_errors)
    some_positive = some_positive || row.achieved > 0;
  CHECK(some_positive);
}

TEST_CASE("a rogue element is thinned away and capping the target trims the universe") {
  LayeredTreeParams p;
  p.k = 2;
  p.universe_size = 6;
  p.seed = 7;
  p.rogue = 4;  // nodes with max 4 hump into the region of their min
  TreeMap tm = layered_tree_map(p);

  L1Engine eng;
  ExtractParams params;
  params.target_size = 6;
  ExtractResult res = canonical_tree_extract(tm, eng, params);
  CHECK(!res.complete);  // 6 is unreachable with the rogue in place
  std::vector<int> elems = res.ctd.l.elements();
  CHECK(elems.size() == 5u);
  CHECK(std::find(elems.begin(), elems.end(), 4) == elems.end());
  CHECK(verify_ctd(res.ctd).ok);

  params.target_size = 5;
  ExtractResult res5 = canonical_tree_extract(tm, eng, params);
  CHECK(res5.complete);
}

TEST_CASE("verification reports ordering violations with the offending nodes") {
  TreeMap tm = spike_map();
  L1Engine eng;
  ExtractParams params;
  params.target_size = 3;
  ExtractResult res = canonical_tree_extract(tm, eng, params);
  REQUIRE(res.complete);

  // Corrupt: push the piece of node (1) into the region of node (2).
  CanonicalTreeDecomposition bad = res.ctd;
  bad.y[FinSubset{1}] = IntVec::unit(25);
  CtdReport rep = verify_ctd(bad);
  CHECK(!rep.ok);
  CHECK(rep.violation.find("out of order") != std::string::npos);

  // Corrupt differently: drop a piece entirely.
  CanonicalTreeDecomposition missing = res.ctd;
  missing.y.erase(FinSubset{3});
  rep = verify_ctd(missing);
  CHECK(!rep.ok);
  CHECK(rep.violation.find("missing piece") != std::string::npos);
}

TEST_CASE("interval identity detects pieces that stray into a level window") {
  // Hand-crafted k = 2 pieces along the plegma pair (1,3), (2,4).  With the
  // level-2 piece of (1,3) misplaced between the two level-1 pieces, the
  // window spanning level 1 cuts more than the level-1 piece out of the
  // rootless approximant of (1,3).
  CanonicalTreeDecomposition ctd;
  ctd.k = 2;
  ctd.l = Universe::explicit_set({1, 2, 3, 4});
  ctd.y[FinSubset{}] = IntVec::unit(1);
  ctd.y[FinSubset{1}] = IntVec::unit(10);
  ctd.y[FinSubset{2}] = IntVec::unit(40);
  ctd.y[FinSubset{1, 3}] = IntVec::unit(20);  // intruder: inside [10, 40]
  ctd.y[FinSubset{2, 4}] = IntVec::unit(50);
  PlegmaTuple pair = {FinSubset{1, 3}, FinSubset{2, 4}};

  std::string why;
  CHECK(!trocan_interval_identity(ctd, pair, 1, &why));
  CHECK(why.find("level 1") != std::string::npos);

  // Level 2's window [20, 50] in turn swallows the level-1 piece of (2).
  CHECK(!trocan_interval_identity(ctd, pair, 2));

  // Repositioning the intruder past the level-1 window restores both.
  ctd.y[FinSubset{1, 3}] = IntVec::unit(45);
  CHECK(trocan_interval_identity(ctd, pair, 1));
  CHECK(trocan_interval_identity(ctd, pair, 2));
}

TEST_CASE("decompositions round-trip through JSON") {
  LayeredTreeParams p;
  p.k = 2;
  p.universe_size = 4;
  p.seed = 3;
  TreeMap tm = layered_tree_map(p);
  L1Engine eng;
  ExtractParams params;
  params.target_size = 4;
  ExtractResult res = canonical_tree_extract(tm, eng, params);

  json j = to_json(res.ctd);
  CanonicalTreeDecomposition back = ctd_from_json(j);
  CHECK(back.k == res.ctd.k);
  CHECK(back.l.elements() == res.ctd.l.elements());
  CHECK(back.y == res.ctd.y);
  CHECK(verify_ctd(back).ok);

  json jm = to_json(tm);
  TreeMap tback = tree_map_from_json(jm);
  CHECK(tback.node == tm.node);
}
