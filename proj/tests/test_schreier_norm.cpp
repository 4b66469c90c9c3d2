#include <catch2/catch_amalgamated.hpp>

#include "plegma/schreier_norm.hpp"

using namespace plegma;

namespace {

SubsetVec vec(std::vector<std::pair<std::vector<int>, Rational>> entries) {
  SubsetVec x;
  for (auto& [s, v] : entries) x.add(FinSubset(s), v);
  return x;
}

// Independent oracle: enumerate every partition of the support into nonempty
// families, keep those whose parts all pass the bounded exhaustive
// feasibility search, and take the best sum of squared masses.
Rational brute_force_norm_square(const SubsetVec& x) {
  std::vector<FinSubset> supp = x.support();
  int n = (int)supp.size();
  REQUIRE(n <= 8);
  std::vector<int> part(n, -1);
  Rational best(0);
  std::function<void(int, int)> rec = [&](int i, int groups) {
    if (i == n) {
      std::vector<Family> fams(groups);
      for (int j = 0; j < n; ++j) fams[part[j]].push_back(supp[j]);
      Rational total(0);
      for (auto& fam : fams) {
        if (!is_schreier_plegmatic(fam, FeasibilityMode::kExact)) return;
        Rational mass(0);
        for (auto& s : fam) mass = mass + abs(x.at(s));
        total = total + mass * mass;
      }
      if (total > best) best = total;
      return;
    }
    for (int g = 0; g <= groups; ++g) {
      part[i] = g;
      rec(i + 1, std::max(groups, g + 1));
    }
    part[i] = -1;
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("norm squares of the three calibration vectors") {
  // Interlaced pair: only singleton families are admissible.
  auto a = vec({{{1, 3}, Rational(1)}, {{2, 4}, Rational(1)}});
  CHECK(schreier_norm(a).square == Rational(2));

  // Shifted pair: one family carries both members.
  auto b = vec({{{2, 4}, Rational(1)}, {{3, 5}, Rational(1)}});
  CHECK(schreier_norm(b).square == Rational(4));

  // Uniform average over all 2-subsets of {1,2,3}: no pair is admissible.
  auto c = vec({{{1, 2}, Rational(1, 3)},
                {{1, 3}, Rational(1, 3)},
                {{2, 3}, Rational(1, 3)}});
  CHECK(schreier_norm(c).square == Rational(1, 3));
}

TEST_CASE("norm is unconditional in the signs") {
  auto a = vec({{{2, 4}, Rational(1)}, {{3, 5}, Rational(-1)}});
  CHECK(schreier_norm(a).square == Rational(4));
  auto b = vec({{{1, 3}, Rational(-1)}, {{2, 4}, Rational(1)}});
  CHECK(schreier_norm(b).square == Rational(2));
}

TEST_CASE("tuples starting late are summed in full") {
  // A plegma tuple whose first member starts at its own length admits the
  // whole support as one family, so the norm is the l1 mass.
  auto x = vec({{{3, 10}, Rational(1)},
                {{4, 11}, Rational(-2)},
                {{5, 12}, Rational(3)}});
  CHECK(schreier_norm(x).square == Rational(36));
}

TEST_CASE("partition witness matches the claimed square") {
  auto x = vec({{{2, 4}, Rational(1, 2)},
                {{3, 5}, Rational(1, 3)},
                {{1, 7}, Rational(2)}});
  auto res = schreier_norm(x);
  Rational total(0);
  for (size_t i = 0; i < res.partition.size(); ++i) {
    CHECK(is_schreier_plegmatic(res.partition[i], FeasibilityMode::kExact));
    Rational mass(0);
    for (auto& s : res.partition[i]) mass = mass + abs(x.at(s));
    CHECK(mass == res.masses[i]);
    total = total + mass * mass;
  }
  CHECK(total == res.square);
}

TEST_CASE("dynamic program agrees with the partition oracle") {
  std::vector<SubsetVec> cases = {
      vec({{{1, 3}, Rational(1)}, {{2, 4}, Rational(2)}, {{3, 5}, Rational(1)}}),
      vec({{{2, 5}, Rational(1)},
           {{3, 6}, Rational(1)},
           {{4, 7}, Rational(-1)},
           {{1, 8}, Rational(1, 2)}}),
      vec({{{2, 4}, Rational(3, 2)},
           {{3, 5}, Rational(1, 2)},
           {{6, 9}, Rational(1)},
           {{7, 10}, Rational(1)},
           {{8, 11}, Rational(2)}}),
      vec({{{1, 2}, Rational(1)}}),
  };
  for (auto& x : cases) CHECK(schreier_norm(x).square == brute_force_norm_square(x));
}

TEST_CASE("degenerate and invalid inputs") {
  CHECK(schreier_norm(SubsetVec()).square == Rational(0));
  SubsetVec mixed;
  mixed.add(FinSubset({1, 3}), Rational(1));
  mixed.add(FinSubset({2}), Rational(1));
  CHECK_THROWS_AS(schreier_norm(mixed), InvalidInput);
}

TEST_CASE("support cap refuses large inputs") {
  SubsetVec big;
  for (int i = 1; i <= 13; ++i) big.add(FinSubset({2 * i, 2 * i + 30}), Rational(1));
  CHECK_THROWS_AS(schreier_norm(big), ScaleRefusal);
  CHECK_NOTHROW(schreier_norm(big, 13));
}

TEST_CASE("norming functionals certify the computed value") {
  auto x = vec({{{2, 4}, Rational(1)},
                {{3, 5}, Rational(-1)},
                {{1, 9}, Rational(1, 2)}});
  auto cert = norming_functional(x);
  std::string why;
  CHECK(verify_certificate(cert, x, &why));
  CHECK(cert.scale == schreier_norm(x).square);

  // Tampering with a mass must be caught.
  auto bad = cert;
  bad.masses[0] = bad.masses[0] + Rational(1);
  CHECK_FALSE(verify_certificate(bad, x, &why));

  // Overlapping families must be caught.
  auto dup = cert;
  dup.families.push_back(dup.families[0]);
  dup.signs.push_back(dup.signs[0]);
  dup.masses.push_back(dup.masses[0]);
  CHECK_FALSE(verify_certificate(dup, x, &why));
}

TEST_CASE("engine interface reports exact enclosures") {
  SchreierEngine eng;
  CHECK(eng.name() == "schreier-plegmatic");
  auto v = eng.norm(vec({{{2, 4}, Rational(1)}, {{3, 5}, Rational(1)}}));
  CHECK(v.lo == v.hi);
  CHECK(v.mid() == Catch::Approx(2.0));
}
