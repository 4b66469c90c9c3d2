#pragma once

// Self-check suite: one deterministic check per shipped guarantee. Every
// check recomputes its expected values through an independent route (brute
// force, closed form, or a frozen regression constant from an exact oracle
// run) rather than trusting the code path under test. The full scale backs
// the acceptance gate; the quick scale trims iteration counts and sweep
// ranges -- never the assertions -- down to a sub-second smoke run.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "plegma/core.hpp"
#include "plegma/ramsey.hpp"
#include "plegma/schreier_norm.hpp"
#include "plegma/seq.hpp"
#include "plegma/smlab.hpp"
#include "plegma/tree.hpp"
#include "plegma/tsirelson.hpp"

namespace plegma::selfcheck {

struct CheckFailure {
  std::string detail;
};

inline void require(bool cond, const std::string& detail) {
  if (!cond) throw CheckFailure{detail};
}

// ---------------------------------------------------------------------------
// 1. Enumeration census: list counts match the subset bijection and the list
//    itself equals a brute-force filter over every l-tuple of k-subsets.
// ---------------------------------------------------------------------------
inline void check_census(bool quick) {
  int n_max = quick ? 6 : 8;
  for (int n = 1; n <= n_max; ++n) {
    Universe u = Universe::initial_segment(n);
    for (int k = 1; k <= n; ++k) {
      std::vector<FinSubset> subs;
      for_each_subset(u, k, [&](const FinSubset& s) {
        subs.push_back(s);
        return true;
      });
      for (int l = 1; k * l <= n; ++l) {
        std::vector<PlegmaTuple> listed = enumerate_plegma(u, k, l);
        long long expect = binomial(n, (long long)k * l);
        require((long long)listed.size() == expect,
                "count mismatch at n=" + std::to_string(n) + " k=" +
                    std::to_string(k) + " l=" + std::to_string(l));

        // Brute force: run the pairwise test over all |subs|^l ordered tuples.
        std::vector<PlegmaTuple> brute;
        std::vector<int> idx((size_t)l, 0);
        PlegmaTuple tup((size_t)l, subs[0]);
        while (true) {
          if (is_plegma(tup)) brute.push_back(tup);
          int j = l - 1;
          while (j >= 0 && idx[(size_t)j] + 1 == (int)subs.size()) --j;
          if (j < 0) break;
          ++idx[(size_t)j];
          tup[(size_t)j] = subs[(size_t)idx[(size_t)j]];
          for (int p = j + 1; p < l; ++p) {
            idx[(size_t)p] = 0;
            tup[(size_t)p] = subs[0];
          }
        }
        std::sort(listed.begin(), listed.end());
        std::sort(brute.begin(), brute.end());
        require(listed == brute,
                "set mismatch at n=" + std::to_string(n) + " k=" +
                    std::to_string(k) + " l=" + std::to_string(l));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 2. Path distance: between separated skipped endpoints the constructed path
//    has exactly k steps, BFS agrees, and no path of fewer steps exists.
// ---------------------------------------------------------------------------
namespace detail {

inline FinSubset random_skipped(std::mt19937_64& rng, int k, int lo, int hi,
                                const Universe& u) {
  std::uniform_int_distribution<int> pick(lo, hi);
  while (true) {
    std::set<int> chosen;
    while ((int)chosen.size() < k) chosen.insert(pick(rng));
    FinSubset s(std::vector<int>(chosen.begin(), chosen.end()));
    if (is_skipped(s, u)) return s;
  }
}

}  // namespace detail

inline void check_paths(bool quick) {
  Universe u = Universe::initial_segment(30);
  std::mt19937_64 rng(20260816);
  int rounds = quick ? 8 : 50;
  for (int k : {1, 2, 3}) {
    for (int round = 0; round < rounds; ++round) {
      FinSubset s = detail::random_skipped(rng, k, 1, 14, u);
      FinSubset t = detail::random_skipped(rng, k, 16, 30, u);

      std::vector<FinSubset> path = plegma_path_between(s, t, u);
      require((int)path.size() == k + 1, "path does not have k steps");
      require(path.front() == s && path.back() == t, "path endpoints wrong");
      for (size_t j = 1; j < path.size(); ++j)
        require(is_plegma_pair(path[j - 1], path[j]), "path step not plegma");

      std::optional<int> dist = plegma_distance(s, t, u);
      require(dist.has_value() && *dist == k,
              "BFS distance differs from k at k=" + std::to_string(k));

      bool shorter = false;
      for_each_plegma_path_upto(s, u, k - 1,
                                [&](const std::vector<FinSubset>& p) {
                                  if (p.size() >= 2 && p.back() == t)
                                    shorter = true;
                                });
      require(!shorter, "found a path shorter than k steps");
    }
  }
}

// ---------------------------------------------------------------------------
// 3. Interval-indicator combinations: the sup norm of a combination along a
//    plegma tuple equals the prefix/suffix closed form, in exact rationals.
// ---------------------------------------------------------------------------
inline void check_summing_formula(bool quick) {
  KSeq<int> x = summing_2seq();
  std::mt19937_64 rng(731);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  std::vector<int> pool(40);
  for (int i = 0; i < 40; ++i) pool[(size_t)i] = i + 1;

  int rounds = quick ? 40 : 200;
  for (int round = 0; round < rounds; ++round) {
    int l = 1 + (int)(rng() % 5);
    std::vector<int> flat;
    std::sample(pool.begin(), pool.end(), std::back_inserter(flat), 2 * l, rng);
    std::sort(flat.begin(), flat.end());
    PlegmaTuple tuple = plegma_from_flat(FinSubset(std::move(flat)), 2, l);

    std::vector<std::vector<Rational>> rows = sup_ball_grid(l, 1);
    for (int extra = 0; extra < 10; ++extra) {
      std::vector<Rational> a;
      for (int j = 0; j < l; ++j) a.emplace_back(num(rng), den(rng));
      rows.push_back(std::move(a));
    }
    for (const auto& a : rows) {
      IntVec w;
      for (int j = 0; j < l; ++j) {
        IntVec xs = x(tuple[(size_t)j]);
        xs *= a[(size_t)j];
        w += xs;
      }
      require(w.linf() == summing_combination_sup(a),
              "closed form differs from direct sup norm");
    }
  }
}

// ---------------------------------------------------------------------------
// 4. Truncation sandwich: empirical values of the truncated-row sequence sit
//    between the full-row and worst-tail combination norms; the unit-row base
//    is exactly flat.
// ---------------------------------------------------------------------------
inline void check_truncation_sandwich(bool) {
  Universe m = Universe::initial_segment(12);
  SMOptions opt;
  opt.horizon = 12;
  std::vector<std::vector<Rational>> grid = sup_ball_grid(3, 2);

  for (bool unit_base : {true, false}) {
    RowBase base = unit_base ? unit_rows() : summing_rows();
    KSeq<int> x = truncation_2seq(base);
    SMEstimate est = empirical_sm(x, m, 3, 3, grid, opt);
    require(est.has_tuples(), "no admissible tuples for the sandwich");
    for (const CoeffStats& row : est.rows) {
      RowSandwich sw = row_sandwich(base, row.coeffs);
      require(sw.lower.to_double() <= row.env_lo + 1e-12,
              "lower bound exceeded an observed value");
      require(row.env_hi <= sw.upper.to_double() + 1e-12,
              "an observed value exceeded the upper bound");
      if (unit_base) {
        require(sw.lower == sw.upper, "unit rows should have a tight sandwich");
        require(row.width() == 0.0, "unit rows should give zero width");
        require(row.min_value == sw.lower.to_double(),
                "unit-row value differs from the base norm");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 5. l1 isometry above the floor: combinations along plegma tuples whose
//    first entry clears the tuple length have partition norm exactly the
//    coefficient l1 mass; below the floor the norm drops strictly.
// ---------------------------------------------------------------------------
inline void check_l1_isometry(bool quick) {
  for (int r : {2, 3}) {
    if (quick && r == 3) continue;
    for (int l = 1; l <= (quick ? 3 : 4); ++l) {
      // Only +-1 rows at the largest scale: the exact partition search walks
      // 3^12 submasks per evaluation there.
      std::vector<std::vector<Rational>> rows;
      if (r == 3 && l == 4) {
        for (int bits = 0; bits < (1 << 4); ++bits) {
          std::vector<Rational> a;
          for (int j = 0; j < 4; ++j) a.emplace_back((bits >> j & 1) ? 1 : -1);
          rows.push_back(std::move(a));
        }
      } else {
        rows = sup_ball_grid(l, 1);
        auto sphere = l1_sphere_grid(l, 3);
        rows.insert(rows.end(), sphere.begin(), sphere.end());
      }

      int horizon = r * l + 4;
      std::vector<int> eligible;
      for (int e = l; e <= horizon; ++e) eligible.push_back(e);
      long long tuples = 0;
      for_each_subset(Universe::explicit_set(eligible), r * l,
                      [&](const FinSubset& flat) {
                        PlegmaTuple tuple = plegma_from_flat(flat, r, l);
                        for (const auto& a : rows) {
                          SubsetVec x;
                          for (int j = 0; j < l; ++j)
                            x.add(tuple[(size_t)j], a[(size_t)j]);
                          SchreierNormResult res = schreier_norm(x);
                          Rational mass = x.l1();
                          require(res.square == mass * mass,
                                  "combination above the floor is not isometric");
                        }
                        ++tuples;
                        return true;
                      });
      require(tuples > 0, "no tuples above the floor at this scale");
    }
  }

  // Below the floor the whole support is no longer one admissible family.
  {
    SubsetVec x;
    x.add(FinSubset{1, 3}, Rational(1));
    x.add(FinSubset{2, 4}, Rational(1));
    SchreierNormResult res = schreier_norm(x);
    require(res.square == Rational(2), "blocked pair should have squared norm 2");
    require(res.square < Rational(4), "blocked pair should drop below l1");
  }
  {
    SubsetVec x;
    x.add(FinSubset{1, 4, 7}, Rational(1));
    x.add(FinSubset{2, 5, 8}, Rational(1));
    x.add(FinSubset{3, 6, 9}, Rational(1));
    SchreierNormResult res = schreier_norm(x);
    require(res.square == Rational(5), "blocked triple should have squared norm 5");
    require(res.square < Rational(9), "blocked triple should drop below l1");
  }
}

// ---------------------------------------------------------------------------
// 6. Cesaro means of the pair basis: the product-family functional equals
//    n^2 / C(3n, 2) for n = 1..6 and the scan reports the limit 2/9.
// ---------------------------------------------------------------------------
inline void check_cesaro(bool) {
  KSeq<FinSubset> y = basis_seq(2, std::make_shared<SchreierEngine>());
  CesaroScan scan = cesaro_scan(y, Universe::initial_segment(18), 1, 6, true);
  require(scan.limit_constant == Rational(2, 9), "limit constant is not 2/9");
  require(scan.rows.size() == 6, "scan should cover n = 1..6");
  for (const CesaroRow& row : scan.rows) {
    long long n = row.n;
    Rational expect = Rational(n * n) / Rational(binomial(3 * n, 2));
    require(row.functional.has_value(), "functional value missing");
    require(*row.functional == expect, "functional differs from n^2 / C(3n,2)");
    require(row.analytic.has_value() && *row.analytic == expect,
            "analytic value differs from n^2 / C(3n,2)");
  }
}

// ---------------------------------------------------------------------------
// 7. Weighted-norm laws at the working preset: exact unit vectors, exact
//    sign-flip invariance, the lower combination law for 100 normalized
//    blocks, and flatness of long block averages under the first level.
// ---------------------------------------------------------------------------
inline void check_weighted_norm(bool quick) {
  TsirelsonConfig cfg = TsirelsonConfig::preset("standard");

  for (int i : {1, 7, 123, 600}) {
    TsirelsonResult r = tsirelson_norm(IntVec::unit(i), cfg);
    require(r.lo == 1.0 && r.hi == 1.0, "unit vector norm is not exactly 1");
  }

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  for (int round = 0; round < (quick ? 1 : 3); ++round) {
    IntVec x, flipped;
    for (int i = 0; i < 40; ++i) {
      Rational c(num(rng), den(rng));
      int pos = 3 * i + 1 + round;
      x.set(pos, c);
      flipped.set(pos, (i % 2 == 0) ? c : -c);
    }
    TsirelsonResult a = tsirelson_norm(x, cfg);
    TsirelsonResult b = tsirelson_norm(flipped, cfg);
    require(a.lo == b.lo && a.hi == b.hi, "sign flip changed the norm");
  }

  // 100 normalized blocks: the first-level split forces norm >= (100/10) * 1.
  std::vector<int> pool(500);
  for (int i = 0; i < 500; ++i) pool[(size_t)i] = i + 1;
  for (int round = 0; round < (quick ? 1 : 20); ++round) {
    std::vector<int> positions;
    std::sample(pool.begin(), pool.end(), std::back_inserter(positions), 100, rng);
    std::sort(positions.begin(), positions.end());
    IntVec sum;
    for (int p : positions) sum.set(p, (rng() & 1) ? Rational(1) : Rational(-1));
    // Each block is a signed unit vector, so every block norm is exactly 1.
    TsirelsonResult r = tsirelson_norm(sum, cfg);
    require(r.lo >= 10.0 - 1e-9, "block combination fell below 10 * min");
  }

  // 201 blocks from the unit ball (201 > 2 * n_1): the first-level share of
  // the average must stay under 2 / m_1 = 0.2. Skipped on the quick scale:
  // the share table alone costs a quarter second.
  for (int round = 0; round < (quick ? 0 : 20); ++round) {
    IntVec sum;
    int pos = 1;
    for (int q = 0; q < 201; ++q) {
      int size = 1 + q % 3;
      IntVec block;
      for (int j = 0; j < size; ++j) {
        int sgn = (rng() & 1) ? 1 : -1;
        block.set(pos++, Rational(sgn * (int)(rng() % 4), 12));
      }
      pos += 1 + (int)(rng() % 3);
      TsirelsonResult bn = tsirelson_norm(block, cfg);
      require(bn.hi <= 1.0, "block left the unit ball");
      sum += block;
    }
    IntVec mean = sum;
    mean *= Rational(1, 201);
    double share = tsirelson_level_share(mean, cfg, 1);
    require(share < 0.2, "block average is not flat under the first level");
  }
}

// ---------------------------------------------------------------------------
// 8. Partition norm oracle: the exact search agrees with an unpruned brute
//    force over every set partition (feasibility by bounded block padding),
//    and the emitted functional certificate attains the norm, for every
//    support of at most 5 pairs inside {1..8}^2 (quick: 2 pairs in {1..5}^2).
// ---------------------------------------------------------------------------
namespace detail {

struct BruteContext {
  std::vector<FinSubset> pairs;              // candidate pairs, fixed order
  std::map<uint64_t, bool> admissible_memo;  // key: sorted member indices

  bool admissible(const std::vector<int>& members) {
    uint64_t key = 0;
    for (int m : members) key = key * 29 + (uint64_t)(m + 1);
    auto it = admissible_memo.find(key);
    if (it != admissible_memo.end()) return it->second;
    Family fam;
    for (int m : members) fam.push_back(pairs[(size_t)m]);
    bool ok = plegmatic_blocks(fam, /*schreier=*/true,
                               FeasibilityMode::kExact, /*max_pad=*/4)
                  .feasible;
    admissible_memo.emplace(key, ok);
    return ok;
  }
};

// Max over set partitions into admissible cells of the sum of squared cell
// masses. Every partition is visited; infeasible ones are discarded whole.
inline Rational brute_partition_norm_square(BruteContext& ctx,
                                            const std::vector<int>& members,
                                            const std::vector<Rational>& values) {
  size_t n = members.size();
  std::vector<std::vector<int>> cells;
  Rational best(0);
  std::function<void(size_t)> place = [&](size_t i) {
    if (i == n) {
      Rational total(0);
      for (const auto& cell : cells) {
        if (!ctx.admissible(cell)) return;
        Rational mass(0);
        for (int m : cell) {
          for (size_t j = 0; j < members.size(); ++j)
            if (members[j] == m) mass = mass + abs(values[j]);
        }
        total = total + mass * mass;
      }
      if (total > best) best = total;
      return;
    }
    // Index loop: recursion appends and removes trailing cells, which would
    // invalidate range-for references into the vector.
    size_t open = cells.size();
    for (size_t c = 0; c < open; ++c) {
      cells[c].push_back(members[i]);
      place(i + 1);
      cells[c].pop_back();
    }
    cells.push_back({members[i]});
    place(i + 1);
    cells.pop_back();
  };
  place(0);
  return best;
}

}  // namespace detail

inline void check_partition_oracle(bool quick) {
  detail::BruteContext ctx;
  int top = quick ? 5 : 8;
  for (int i = 1; i <= top; ++i)
    for (int j = i + 1; j <= top; ++j) ctx.pairs.push_back(FinSubset{i, j});
  int np = (int)ctx.pairs.size();
  int max_support = quick ? 2 : 5;

  const Rational patternA[5] = {Rational(1), Rational(-2), Rational(3),
                                Rational(-4), Rational(5)};
  const Rational patternB[5] = {Rational(1), Rational(-1), Rational(1, 2),
                                Rational(-1, 2), Rational(1, 3)};

  std::vector<int> members;
  long long cases = 0;
  std::function<void(int)> sweep = [&](int from) {
    if (!members.empty()) {
      for (const Rational* pattern : {patternA, patternB}) {
        SubsetVec x;
        std::vector<Rational> values;
        for (size_t j = 0; j < members.size(); ++j) {
          x.add(ctx.pairs[(size_t)members[j]], pattern[j]);
          values.push_back(pattern[j]);
        }
        SchreierNormResult res = schreier_norm(x);
        Rational brute = detail::brute_partition_norm_square(ctx, members, values);
        require(res.square == brute, "partition search differs from brute force");

        DualCertificate cert = norming_functional(x);
        std::string why;
        require(verify_certificate(cert, x, &why), "certificate rejected: " + why);
        require(cert.scale == res.square, "certificate scale is not the norm");
        ++cases;
      }
    }
    if ((int)members.size() == max_support) return;
    for (int m = from; m < np; ++m) {
      members.push_back(m);
      sweep(m + 1);
      members.pop_back();
    }
  };
  sweep(0);
  long long expect = 0;
  for (int s = 1; s <= max_support; ++s) expect += binomial(np, s);
  require(cases == 2 * expect, "sweep did not cover every support");
}

// ---------------------------------------------------------------------------
// 9. Density thresholds: the singleton scan reproduces ceil(l / delta); the
//    pair scan at l = 2 matches regression values frozen from an exact
//    largest-free-set oracle run.
// ---------------------------------------------------------------------------
inline void check_density(bool quick) {
  for (int l = 2; l <= (quick ? 3 : 5); ++l) {
    for (auto [p, q] : {std::pair{1, 4}, std::pair{1, 3}, std::pair{1, 2},
                        std::pair{1, 1}}) {
      Rational delta(p, q);
      DensityScanResult scan = density_threshold_scan(1, l, delta, 24);
      long long expect = (l * q + p - 1) / p;  // ceil(l / delta)
      require(scan.threshold_n.has_value() && *scan.threshold_n == expect,
              "singleton threshold differs from ceil(l/delta)");
    }
  }

  // Frozen from the exact oracle: k = 2, l = 2 free-set sizes 1, 3, 5, 7 at
  // n = 2..5 give threshold 5 for both densities.
  for (auto [p, q] : {std::pair{4, 5}, std::pair{9, 10}}) {
    DensityScanResult scan = density_threshold_scan(2, 2, Rational(p, q), 10);
    require(scan.threshold_n.has_value() && *scan.threshold_n == 5,
            "pair threshold differs from the frozen value 5");
    const int frozen_free[4] = {1, 3, 5, 7};
    require(scan.rows.size() == 4, "pair scan should stop at n = 5");
    for (size_t i = 0; i < 4; ++i)
      require(scan.rows[i].largest_free == frozen_free[i],
              "largest free set differs from the frozen oracle value");
    require(!scan.counterexample.empty(),
            "missing witness that n = 4 is below the threshold");
    for (const FinSubset& s : scan.counterexample)
      require(s.size() == 2, "witness member has wrong cardinality");
  }
}

// ---------------------------------------------------------------------------
// 10. Tree decompositions: random layered maps with geometric tails extract
//     completely, every branch lands inside its scheduled tolerance, and the
//     interval-restriction identity holds on every plegma tuple of the
//     thinned universe.
// ---------------------------------------------------------------------------
inline void check_tree_decomposition(bool quick) {
  L1Engine eng;
  for (int round = 0; round < (quick ? 3 : 20); ++round) {
    LayeredTreeParams p;
    p.k = 1 + round % 3;
    p.universe_size = (p.k == 3) ? 6 : 4 + round % 3;
    p.seed = 1000 + (uint64_t)round;
    TreeMap tm = layered_tree_map(p);
    tm.validate();

    ExtractParams params;
    params.target_size = p.universe_size;
    ExtractResult res = canonical_tree_extract(tm, eng, params);
    require(res.complete, "extraction did not reach the target size");
    require(!res.branch_errors.empty(), "no branch errors reported");
    for (const BranchError& row : res.branch_errors)
      require(row.achieved < row.claimed.to_double(),
              "branch error reached the scheduled tolerance");

    CtdReport rep = verify_ctd(res.ctd, p.universe_size);
    require(rep.ok, "verification failed: " + rep.violation);

    // Direct re-check of the interval identity on every plegma tuple.
    for (int len = 2; len * res.ctd.k <= res.ctd.l.size(); ++len) {
      for_each_plegma(res.ctd.l, res.ctd.k, len, [&](const PlegmaTuple& tuple) {
        for (int j = 1; j <= res.ctd.k; ++j) {
          std::string why;
          require(trocan_interval_identity(res.ctd, tuple, j, &why),
                  "interval identity failed: " + why);
        }
        return true;
      });
    }
  }
}

// ---------------------------------------------------------------------------
// 11. Composition consistency: the two-level sequence built from the doubling
//     pattern over the diagonal-pair basis has empirical values matching the
//     direct pattern norms within (1 + 2CK) * delta, with C, K, delta all
//     measured from the run itself.
// ---------------------------------------------------------------------------
inline void check_composition(bool quick) {
  KSeq<FinSubset> x;
  x.k = 1;
  x.name = "diagonal-pairs";
  x.engine = std::make_shared<SchreierEngine>();
  x.at = [](const FinSubset& s) {
    int n = s.at1(1);
    SubsetVec v;
    v.set(FinSubset{2 * n - 1, 2 * n}, Rational(1));
    return v;
  };
  // Only singleton families fit diagonal pairs, so combinations of x are
  // exactly l2 in the coefficients; the ambient for the pattern is l2.
  KSeq<FinSubset> z = compose_seq(x, doubling_pattern(), 1);

  L2Engine ambient;
  double C = measured_basis_constant(ambient, 20);
  double K = 0.0;
  BlockPattern pattern = doubling_pattern();
  for (int t = 1; t <= 20; ++t)
    K = std::max(K, ambient.norm(pattern(FinSubset{t})).hi);

  Universe m = Universe::initial_segment(14);
  SMOptions opt;
  opt.horizon = 14;
  for (int l = 2; l <= (quick ? 2 : 3); ++l) {
    std::vector<std::vector<Rational>> grid = sup_ball_grid(l, 2);
    SMEstimate est = empirical_sm(z, m, l, l, grid, opt);
    require(est.has_tuples(), "no admissible tuples for the composition");

    double delta = 0.0;
    for (const CoeffStats& row : est.rows) delta = std::max(delta, row.width());
    double tol = (1.0 + 2.0 * C * K) * delta;

    for (const CoeffStats& row : est.rows) {
      Rational sq(0);
      for (const Rational& a : row.coeffs) sq = sq + Rational(2) * a * a;
      double direct = std::sqrt(sq.to_double());
      require(std::fabs(row.min_value - direct) <= tol + 1e-12,
              "empirical minimum strayed from the direct pattern norm");
      require(std::fabs(row.max_value - direct) <= tol + 1e-12,
              "empirical maximum strayed from the direct pattern norm");
      require(row.min_value <= direct + 1e-12 && direct <= row.max_value + 1e-12,
              "direct pattern norm outside the observed range");
    }
  }
}

// ---------------------------------------------------------------------------
// 12. Exact symmetries of the empirical estimates: per-coordinate sign flips
//     leave every statistic unchanged, and a constant summand cancels exactly
//     on zero-sum coefficient tuples.
// ---------------------------------------------------------------------------
inline void check_symmetries(bool) {
  Universe m = Universe::initial_segment(12);
  SMOptions opt;
  opt.horizon = 12;

  KSeq<FinSubset> basis = basis_seq(2, std::make_shared<SchreierEngine>());
  std::vector<std::vector<Rational>> grid = sup_ball_grid(2, 2);
  std::vector<std::vector<Rational>> flipped;
  for (const auto& row : grid)
    flipped.push_back({row[0], -row[1]});

  SMEstimate est = empirical_sm(basis, m, 2, 2, grid, opt);
  SMEstimate estf = empirical_sm(basis, m, 2, 2, flipped, opt);
  require(est.rows.size() == estf.rows.size(), "row counts differ");
  for (size_t i = 0; i < est.rows.size(); ++i) {
    require(est.rows[i].min_value == estf.rows[i].min_value &&
                est.rows[i].max_value == estf.rows[i].max_value &&
                est.rows[i].mean_value == estf.rows[i].mean_value,
            "sign flip changed an empirical statistic");
  }

  // Zero-sum cancellation of a constant part, exact at the vector level.
  KSeq<int> x1;
  x1.k = 1;
  x1.name = "unit";
  x1.engine = std::make_shared<C0Engine>();
  x1.at = [](const FinSubset& t) { return IntVec::unit(t.at1(1)); };

  KSeq<int> x2 = x1;
  x2.name = "constant";
  x2.at = [](const FinSubset&) { return IntVec::unit(50); };

  KSeq<int> whole = x1;
  whole.name = "whole";
  auto f1 = x1.at;
  auto f2 = x2.at;
  whole.at = [f1, f2](const FinSubset& s) { return f1(s) + f2(s); };

  SMOptions opt8;
  opt8.horizon = 8;
  SplitReport rep = splitting_check(whole, x1, x2, Universe::initial_segment(10),
                                    2, 2, opt8);
  require(rep.triangle_ok, "triangle inequality failed on a tuple");
  require(rep.zero_sum_exact.has_value() && *rep.zero_sum_exact,
          "zero-sum rows did not cancel the constant part exactly");
}

// ---------------------------------------------------------------------------
// Registry and runner
// ---------------------------------------------------------------------------

struct Check {
  int number;
  const char* group;  // the subcommand family whose guarantees it guards
  const char* name;
  void (*run)(bool quick);
  double full_budget_s;  // wall budget for the full scale, 0 = none
};

inline const std::vector<Check>& checks() {
  static const std::vector<Check> table = {
      {1, "plegma", "enumeration census equals brute-force filter",
       check_census, 10.0},
      {2, "plegma", "skipped endpoints lie at path distance k", check_paths,
       30.0},
      {3, "seq", "interval combinations match the prefix/suffix form",
       check_summing_formula, 0.0},
      {4, "seq", "truncated rows sit inside the combination sandwich",
       check_truncation_sandwich, 0.0},
      {5, "norm", "partition norm is isometric above the floor",
       check_l1_isometry, 60.0},
      {6, "sm", "Cesaro functionals follow the closed form with limit 2/9",
       check_cesaro, 0.0},
      {7, "norm", "weighted norm laws hold at the working preset",
       check_weighted_norm, 300.0},
      {8, "norm", "partition search equals the unpruned partition brute force",
       check_partition_oracle, 0.0},
      {9, "ramsey", "density thresholds match the closed form and frozen oracle",
       check_density, 0.0},
      {10, "seq", "layered tree maps extract within scheduled tolerances",
       check_tree_decomposition, 0.0},
      {11, "seq", "composed sequence matches direct pattern norms",
       check_composition, 0.0},
      {12, "sm", "sign-flip and zero-sum symmetries are exact",
       check_symmetries, 0.0},
  };
  return table;
}

// Config-validation guard used by the command line selftest: deliberately
// inadmissible weights (their reciprocals sum past the 1/9 budget) must be
// refused by the validator.
inline void check_weight_budget_guard(bool) {
  TsirelsonConfig bad = TsirelsonConfig::preset("bad-budget");
  require(bad.budget() > Rational(1, 9), "preset is not actually over budget");
  bool refused = false;
  std::string message;
  try {
    bad.validate();
  } catch (const InvalidInput& e) {
    refused = true;
    message = e.what();
  }
  require(refused, "over-budget weights were accepted by the validator");
  require(message.find("1/9") != std::string::npos,
          "refusal does not name the budget");
}

struct Outcome {
  int number = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

inline Outcome run_check(const Check& c, bool quick) {
  Outcome out;
  out.number = c.number;
  out.name = c.name;
  auto start = std::chrono::steady_clock::now();
  try {
    c.run(quick);
    out.pass = true;
  } catch (const CheckFailure& f) {
    out.detail = f.detail;
  } catch (const std::exception& e) {
    out.detail = std::string("exception: ") + e.what();
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

// Run a batch of checks on up to `threads` workers (1 = sequential) and
// return the outcomes in input order. Checks are independent of each other,
// so the schedule cannot change any result, only the wall time.
inline std::vector<Outcome> run_checks(const std::vector<Check>& batch,
                                       bool quick, int threads) {
  std::vector<Outcome> out(batch.size());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, (int)batch.size());
  if (threads <= 1) {
    for (size_t i = 0; i < batch.size(); ++i) out[i] = run_check(batch[i], quick);
    return out;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= batch.size()) return;
      out[i] = run_check(batch[i], quick);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve((size_t)threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace plegma::selfcheck
