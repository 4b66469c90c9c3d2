#pragma once

// Empirical spreading-model laboratory.
//
// Everything here is finite and reproducible: given a k-sequence generator, a
// universe M, an admissibility level l, and a coefficient net, we evaluate
//
//   || a_1 x_{s_1} + ... + a_m x_{s_m} ||
//
// over plegma m-tuples whose entries come from M, start no earlier than the
// l-th element of M, and stay below a horizon.  The spread (max - min) of the
// observed values measures how far the sequence is from having settled into
// its asymptotic behaviour; stabilization, l1-constant estimation, splitting
// diagnostics, and Cesaro means are all built on the same evaluation loop.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "plegma/core.hpp"
#include "plegma/engines.hpp"
#include "plegma/fin_subset.hpp"
#include "plegma/rational.hpp"
#include "plegma/seq.hpp"
#include "plegma/sparse_vec.hpp"

namespace plegma {

// ---------------------------------------------------------------------------
// Coefficient nets
// ---------------------------------------------------------------------------

// All m-tuples (n_1/q, ..., n_m/q) with |n_i| <= q, excluding the zero tuple.
// A (1/q)-net of the sup-norm unit ball.
inline std::vector<std::vector<Rational>> sup_ball_grid(int m, int q) {
  if (m < 1 || q < 1) throw InvalidInput("sup_ball_grid: need m >= 1, q >= 1");
  std::vector<std::vector<Rational>> out;
  std::vector<int> n(m, -q);
  while (true) {
    bool all_zero = std::all_of(n.begin(), n.end(), [](int v) { return v == 0; });
    if (!all_zero) {
      std::vector<Rational> row;
      row.reserve(m);
      for (int v : n) row.emplace_back(v, q);
      out.push_back(std::move(row));
    }
    int i = m - 1;
    while (i >= 0 && n[i] == q) n[i--] = -q;
    if (i < 0) break;
    ++n[i];
  }
  return out;
}

// All m-tuples with |n_1| + ... + |n_m| = q, scaled by 1/q: a grid on the
// l1-sphere (coefficients of absolute values summing to one).
inline std::vector<std::vector<Rational>> l1_sphere_grid(int m, int q) {
  if (m < 1 || q < 1) throw InvalidInput("l1_sphere_grid: need m >= 1, q >= 1");
  std::vector<std::vector<Rational>> out;
  std::vector<int> n(m, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == m - 1) {
      for (int sgn : {left, -left}) {
        n[i] = sgn;
        std::vector<Rational> row;
        row.reserve(m);
        for (int v : n) row.emplace_back(v, q);
        out.push_back(std::move(row));
        if (left == 0) break;  // avoid duplicating the zero entry
      }
      return;
    }
    for (int mag = 0; mag <= left; ++mag) {
      for (int sgn : {mag, -mag}) {
        n[i] = sgn;
        rec(i + 1, left - mag);
        if (mag == 0) break;
      }
    }
  };
  rec(0, q);
  return out;
}

// ---------------------------------------------------------------------------
// Empirical estimates
// ---------------------------------------------------------------------------

enum class SampleMode { kExhaustive, kSampled };

struct SMOptions {
  int horizon = 30;                         // tuple entries stay <= horizon
  SampleMode mode = SampleMode::kExhaustive;
  uint64_t seed = 1;                        // kSampled only
  long long samples = 200;                  // kSampled only
  long long tuple_cap = 200000;             // refuse larger exhaustive runs
};

// Per-coefficient-tuple statistics of ||sum a_i x_{s_i}|| over the admissible
// tuples.  min/max/mean are over norm midpoints; [env_lo, env_hi] is the
// conservative envelope (min of lower enclosures, max of upper enclosures).
struct CoeffStats {
  std::vector<Rational> coeffs;
  double min_value = 0, max_value = 0, mean_value = 0;
  double env_lo = 0, env_hi = 0;
  long long count = 0;
  double width() const { return max_value - min_value; }
};

struct SMEstimate {
  int l = 1, m = 1;
  long long tuple_count = 0;  // admissible tuples evaluated
  std::vector<CoeffStats> rows;
  bool has_tuples() const { return tuple_count > 0; }
};

namespace detail {

// Run `visit` over the admissible plegma m-tuples: entries drawn from the
// universe, all >= the l-th universe element, all <= horizon.  Exhaustive
// enumeration or uniform flat sampling with a fixed seed.
template <class Visit>
inline long long for_each_admissible(const Universe& m_univ, int k, int l, int mlen,
                                     const SMOptions& opt, Visit&& visit) {
  if (l < 1 || l > m_univ.size())
    throw InvalidInput("spreading-model estimate: level exceeds the universe");
  int floor_value = m_univ.at1(l);
  std::vector<int> eligible;
  for (int e : m_univ.elements())
    if (e >= floor_value && e <= opt.horizon) eligible.push_back(e);
  int flat_size = k * mlen;
  if ((int)eligible.size() < flat_size) return 0;

  long long count = 0;
  if (opt.mode == SampleMode::kExhaustive) {
    long long total = binomial((long long)eligible.size(), flat_size);
    if (total > opt.tuple_cap)
      throw ScaleRefusal("spreading-model estimate: " + std::to_string(total) +
                         " admissible tuples exceed the exhaustive cap of " +
                         std::to_string(opt.tuple_cap));
    Universe pool = Universe::explicit_set(eligible);
    for_each_plegma(pool, k, mlen, [&](const PlegmaTuple& t) {
      ++count;
      visit(t);
      return true;
    });
  } else {
    std::mt19937_64 rng(opt.seed);
    std::vector<int> idx(eligible.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    for (long long s = 0; s < opt.samples; ++s) {
      // Uniform flat: a random flat_size-subset of the eligible elements.
      for (int i = 0; i < flat_size; ++i) {
        std::uniform_int_distribution<int> pick(i, (int)idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
      }
      std::vector<int> flat(flat_size);
      for (int i = 0; i < flat_size; ++i) flat[i] = eligible[idx[i]];
      std::sort(flat.begin(), flat.end());
      ++count;
      visit(plegma_from_flat(FinSubset(flat), k, mlen));
    }
  }
  return count;
}

}  // namespace detail

template <class Index>
inline SMEstimate empirical_sm(const KSeq<Index>& x, const Universe& m_univ, int l,
                               int mlen,
                               const std::vector<std::vector<Rational>>& coeff_tuples,
                               const SMOptions& opt = {}) {
  if (mlen < 1) throw InvalidInput("spreading-model estimate: tuple length must be >= 1");
  for (const auto& a : coeff_tuples)
    if ((int)a.size() != mlen)
      throw InvalidInput("spreading-model estimate: coefficient tuple length mismatch");

  SMEstimate est;
  est.l = l;
  est.m = mlen;
  est.rows.resize(coeff_tuples.size());
  for (size_t r = 0; r < coeff_tuples.size(); ++r) est.rows[r].coeffs = coeff_tuples[r];

  std::vector<double> sums(coeff_tuples.size(), 0.0);
  est.tuple_count = detail::for_each_admissible(
      m_univ, x.k, l, mlen, opt, [&](const PlegmaTuple& t) {
        std::vector<SparseVec<Index>> members;
        members.reserve(mlen);
        for (const FinSubset& s : t) members.push_back(x.at(s));
        for (size_t r = 0; r < coeff_tuples.size(); ++r) {
          SparseVec<Index> v;
          for (int i = 0; i < mlen; ++i) {
            SparseVec<Index> piece = members[i];
            piece *= coeff_tuples[r][i];
            v += piece;
          }
          NormValue nv = x.engine->norm(v);
          CoeffStats& row = est.rows[r];
          double mid = nv.mid();
          if (row.count == 0) {
            row.min_value = row.max_value = mid;
            row.env_lo = nv.lo;
            row.env_hi = nv.hi;
          } else {
            row.min_value = std::min(row.min_value, mid);
            row.max_value = std::max(row.max_value, mid);
            row.env_lo = std::min(row.env_lo, nv.lo);
            row.env_hi = std::max(row.env_hi, nv.hi);
          }
          sums[r] += mid;
          ++row.count;
        }
      });
  for (size_t r = 0; r < coeff_tuples.size(); ++r)
    if (est.rows[r].count > 0) est.rows[r].mean_value = sums[r] / (double)est.rows[r].count;
  return est;
}

// ---------------------------------------------------------------------------
// Stabilization
// ---------------------------------------------------------------------------

struct StabilizeRow {
  int l = 1;
  double worst_width = 0;  // max width over m <= l and the coefficient net
  double delta = 0;        // target
  bool stabilized = false;
  int universe_size = 0;   // |M| when this level was measured
};

struct StabilizeResult {
  Universe m = Universe::initial_segment(0);
  std::vector<StabilizeRow> rows;
  bool complete = false;
};

// Greedy finite analogue of the subsequence-extraction argument: start from a
// triangularly sparsified universe (at least l-1 untouched integers between
// the l-th and (l+1)-th picks), then at each level keep dropping the leading
// element — which raises the admissibility floor M(l) — until every m <= l
// and every net coefficient tuple has empirical width at most delta(l), or
// the universe runs out (that level is flagged unstabilized).
template <class Index>
inline StabilizeResult sm_stabilize(const KSeq<Index>& x,
                                    const std::vector<double>& delta, int target_l,
                                    const SMOptions& opt, int net_resolution = 2) {
  if (target_l < 1 || (int)delta.size() < target_l)
    throw InvalidInput("sm_stabilize: need one delta per level up to the target");

  // Triangular sparsification within {1..horizon}.
  std::vector<int> picks;
  for (int v = 1, gap = 0; v <= opt.horizon; v += ++gap) picks.push_back(v);

  StabilizeResult out;
  SMOptions level_opt = opt;
  for (int l = 1; l <= target_l; ++l) {
    StabilizeRow row;
    row.l = l;
    row.delta = delta[l - 1];
    while (true) {
      Universe m_univ = Universe::explicit_set(picks);
      row.universe_size = (int)picks.size();
      double worst = 0;
      bool enough = true;
      for (int mlen = 1; mlen <= l; ++mlen) {
        auto net = sup_ball_grid(mlen, net_resolution);
        SMEstimate est = empirical_sm(x, m_univ, l, mlen, net, level_opt);
        if (!est.has_tuples()) {
          enough = false;
          break;
        }
        for (const CoeffStats& r : est.rows) worst = std::max(worst, r.width());
      }
      if (enough && worst <= row.delta) {
        row.worst_width = worst;
        row.stabilized = true;
        break;
      }
      if (!enough || (int)picks.size() <= l + x.k * l) {
        row.worst_width = worst;
        row.stabilized = false;  // universe exhausted before settling
        break;
      }
      // Drop the leading element: M(l) moves up, later gaps only widen.
      picks.erase(picks.begin());
    }
    out.rows.push_back(row);
  }
  out.m = Universe::explicit_set(picks);
  out.complete = std::all_of(out.rows.begin(), out.rows.end(),
                             [](const StabilizeRow& r) { return r.stabilized; });
  return out;
}

// ---------------------------------------------------------------------------
// l1-constant and splitting diagnostics
// ---------------------------------------------------------------------------

struct L1ConstantResult {
  double value = 0;                 // min over the net of the empirical min
  std::vector<Rational> witness;   // coefficients attaining it
  long long tuple_count = 0;
};

// Empirical lower l1-constant at level l: the worst (smallest) observed norm
// of a combination with |a_1| + ... + |a_l| = 1, over the l1-sphere grid.
template <class Index>
inline L1ConstantResult l1_constant(const KSeq<Index>& x, const Universe& m_univ,
                                    int l, int grid_resolution,
                                    const SMOptions& opt = {}) {
  auto grid = l1_sphere_grid(l, grid_resolution);
  SMEstimate est = empirical_sm(x, m_univ, l, l, grid, opt);
  if (!est.has_tuples())
    throw InvalidInput("l1_constant: no admissible tuples below the horizon");
  L1ConstantResult out;
  out.tuple_count = est.tuple_count;
  bool first = true;
  for (const CoeffStats& row : est.rows) {
    if (first || row.env_lo < out.value) {
      out.value = row.env_lo;
      out.witness = row.coeffs;
      first = false;
    }
  }
  return out;
}

struct SplitTriangleRow {
  std::vector<Rational> coeffs;
  double whole_min = 0, part1_min = 0, part2_min = 0;  // empirical minima
  bool triangle_ok = false;  // whole <= part1 + part2 pointwise over tuples
};

struct SplitReport {
  L1ConstantResult whole, part1, part2;
  std::vector<SplitTriangleRow> rows;
  bool triangle_ok = true;
  // Set when part2 is constant on the sampled indices: for zero-sum
  // coefficient tuples the constant summand cancels, so the whole and part1
  // combinations coincide as vectors; records whether that held exactly.
  std::optional<bool> zero_sum_exact;
};

// Diagnostics for a pointwise split x = x1 + x2.  Additivity is re-checked on
// a sample of indices and is an input error if violated.
template <class Index>
inline SplitReport splitting_check(const KSeq<Index>& x, const KSeq<Index>& x1,
                                   const KSeq<Index>& x2, const Universe& m_univ,
                                   int l, int grid_resolution,
                                   const SMOptions& opt = {}) {
  if (x1.k != x.k || x2.k != x.k)
    throw InvalidInput("splitting_check: arities of the parts must match the whole");

  // Additivity on a sample of indices.
  bool constant_part2 = true;
  std::optional<SparseVec<Index>> first_x2;
  long long seen = 0;
  for_each_subset(Universe::initial_segment(opt.horizon), x.k, [&](const FinSubset& s) {
    SparseVec<Index> whole = x.at(s), sum = x1.at(s) + x2.at(s);
    if (whole != sum)
      throw InvalidInput("splitting_check: x differs from x1 + x2 at " + s.to_string());
    if (!first_x2)
      first_x2 = x2.at(s);
    else if (*first_x2 != x2.at(s))
      constant_part2 = false;
    return ++seen < 64;
  });

  SplitReport rep;
  rep.whole = l1_constant(x, m_univ, l, grid_resolution, opt);
  rep.part1 = l1_constant(x1, m_univ, l, grid_resolution, opt);
  rep.part2 = l1_constant(x2, m_univ, l, grid_resolution, opt);

  // One pass over the admissible tuples, checking the triangle inequality
  // per tuple and — when part2 is constant and the coefficients sum to zero —
  // exact vector equality of the whole and part1 combinations.
  auto grid = l1_sphere_grid(l, grid_resolution);
  std::vector<bool> zero_sum(grid.size());
  for (size_t r = 0; r < grid.size(); ++r) {
    Rational total(0);
    for (const Rational& c : grid[r]) total += c;
    zero_sum[r] = total.is_zero();
  }
  rep.rows.resize(grid.size());
  for (size_t r = 0; r < grid.size(); ++r) rep.rows[r].coeffs = grid[r];
  bool zero_sum_seen = false, zero_sum_ok = true, first_tuple = true;
  detail::for_each_admissible(
      m_univ, x.k, l, l, opt, [&](const PlegmaTuple& t) {
        std::vector<SparseVec<Index>> mw, m1, m2;
        for (const FinSubset& s : t) {
          mw.push_back(x.at(s));
          m1.push_back(x1.at(s));
          m2.push_back(x2.at(s));
        }
        for (size_t r = 0; r < grid.size(); ++r) {
          SparseVec<Index> vw, v1, v2;
          for (int i = 0; i < l; ++i) {
            SparseVec<Index> p = mw[i];
            p *= grid[r][i];
            vw += p;
            p = m1[i];
            p *= grid[r][i];
            v1 += p;
            p = m2[i];
            p *= grid[r][i];
            v2 += p;
          }
          double nw = x.engine->norm(vw).mid();
          double n1 = x.engine->norm(v1).mid();
          double n2 = x.engine->norm(v2).mid();
          SplitTriangleRow& row = rep.rows[r];
          if (first_tuple) {
            row.whole_min = nw;
            row.part1_min = n1;
            row.part2_min = n2;
            row.triangle_ok = true;
          } else {
            row.whole_min = std::min(row.whole_min, nw);
            row.part1_min = std::min(row.part1_min, n1);
            row.part2_min = std::min(row.part2_min, n2);
          }
          if (nw > n1 + n2 + 1e-9) row.triangle_ok = false;
          if (constant_part2 && zero_sum[r]) {
            zero_sum_seen = true;
            if (vw != v1) zero_sum_ok = false;
          }
        }
        first_tuple = false;
      });
  for (const SplitTriangleRow& row : rep.rows)
    rep.triangle_ok = rep.triangle_ok && row.triangle_ok;
  if (zero_sum_seen) rep.zero_sum_exact = zero_sum_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Cesaro means
// ---------------------------------------------------------------------------

// Average of x_s over all k-subsets of the first n universe elements.
template <class Index>
inline SparseVec<Index> cesaro_mean(const KSeq<Index>& x, const Universe& m_univ,
                                    int n) {
  if (n < x.k)
    throw InvalidInput("cesaro_mean: need at least as many elements as the arity");
  if (n > m_univ.size())
    throw InvalidInput("cesaro_mean: universe has fewer than n elements");
  std::vector<int> first_n;
  for (int i = 1; i <= n; ++i) first_n.push_back(m_univ.at1(i));
  SparseVec<Index> acc;
  for_each_subset(Universe::explicit_set(first_n), x.k, [&](const FinSubset& s) {
    acc += x.at(s);
    return true;
  });
  acc *= Rational(1, binomial(n, x.k));
  return acc;
}

struct CesaroRow {
  int n = 1;                       // scan parameter
  int mean_over = 1;               // subsets of this many leading elements
  std::optional<double> norm_lo, norm_hi;  // absent if the engine refused
  std::optional<Rational> functional;      // product-family functional value
  std::optional<Rational> analytic;        // closed form n^r / C((r+1)n, r)
};

struct CesaroScan {
  std::vector<CesaroRow> rows;
  Rational limit_constant{0};  // r! / (r+1)^r, functional mode only
};

// Norm-only scan, any index type: stage n records the ambient norm of the
// Cesaro mean over the first n universe elements (absent on engine refusal).
template <class Index>
inline CesaroScan cesaro_scan(const KSeq<Index>& x, const Universe& m_univ,
                              int n_from, int n_to) {
  if (n_from < x.k || n_to < n_from) throw InvalidInput("cesaro_scan: bad n range");
  CesaroScan out;
  for (int n = n_from; n <= n_to; ++n) {
    CesaroRow row;
    row.n = n;
    row.mean_over = n;
    SparseVec<Index> y = cesaro_mean(x, m_univ, n);
    try {
      NormValue nv = x.engine->norm(y);
      row.norm_lo = nv.lo;
      row.norm_hi = nv.hi;
    } catch (const ScaleRefusal&) {
    }
    out.rows.push_back(row);
  }
  return out;
}

// Norm scan of Cesaro means; in functional mode (subset-indexed sequences
// only) each stage n averages over the first (r+1)n elements (r = arity) and
// pairs the mean against the product-family functional sum_{s in F_1 x ... x
// F_r} y(s) with F_i the i-th block of n universe elements after the first n.
inline CesaroScan cesaro_scan(const KSeq<FinSubset>& x, const Universe& m_univ,
                              int n_from, int n_to, bool functional_mode) {
  if (n_from < 1 || n_to < n_from) throw InvalidInput("cesaro_scan: bad n range");
  CesaroScan out;
  int r = x.k;
  if (functional_mode) {
    long long num = 1, den = 1;
    for (int i = 2; i <= r; ++i) num *= i;
    for (int i = 0; i < r; ++i) den *= (r + 1);
    out.limit_constant = Rational(num, den);
  }
  for (int n = n_from; n <= n_to; ++n) {
    CesaroRow row;
    row.n = n;
    row.mean_over = functional_mode ? (r + 1) * n : n;
    SubsetVec y = cesaro_mean(x, m_univ, row.mean_over);
    try {
      NormValue nv = x.engine->norm(y);
      row.norm_lo = nv.lo;
      row.norm_hi = nv.hi;
    } catch (const ScaleRefusal&) {
      // Mean support outgrew the exact engine; report the functional only.
    }
    if (functional_mode) {
      // Product family: F_i = {M(in+1), ..., M((i+1)n)} for i = 1..r.
      std::vector<std::vector<int>> blocks(r);
      for (int i = 1; i <= r; ++i)
        for (int j = i * n + 1; j <= (i + 1) * n; ++j)
          blocks[i - 1].push_back(m_univ.at1(j));
      Rational total(0);
      std::vector<int> pickv(r);
      std::function<void(int)> rec = [&](int i) {
        if (i == r) {
          total += y.at(FinSubset(pickv));
          return;
        }
        for (int e : blocks[i]) {
          pickv[i] = e;
          rec(i + 1);
        }
      };
      rec(0);
      row.functional = total;
      long long npow = 1;
      for (int i = 0; i < r; ++i) npow *= n;
      row.analytic = Rational(npow, binomial((long long)(r + 1) * n, r));
    }
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measured constants for composition experiments
// ---------------------------------------------------------------------------

// Empirical basis constant of the ambient coordinate basis: the worst ratio
// ||prefix of v|| / ||v|| over a deterministic sample of grid vectors.
inline double measured_basis_constant(const NormEngine<int>& engine, int horizon,
                                      int samples = 64, uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  double worst = 1.0;
  for (int t = 0; t < samples; ++t) {
    IntVec v;
    for (int i = 1; i <= horizon; ++i) {
      int c = coeff(rng);
      if (c) v.set(i, Rational(c, 3));
    }
    if (v.empty()) continue;
    double whole = engine.norm(v).lo;
    if (whole <= 0) continue;
    for (int p = 1; p < horizon; ++p) {
      IntVec prefix = v.filter([&](int i) { return i <= p; });
      if (prefix.empty()) continue;
      worst = std::max(worst, engine.norm(prefix).hi / whole);
    }
  }
  return worst;
}

}  // namespace plegma
