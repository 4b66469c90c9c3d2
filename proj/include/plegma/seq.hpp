#pragma once

// The sequence zoo: k-sequences x : [N]^k -> X presented as lazy generators,
// together with the constructions that build new k-sequences from old ones
// (lifting to higher arity, pattern composition, convex renorming).
//
// A KSeq owns nothing heavy: `at` synthesizes x_s on demand and `engine`
// evaluates norms in the ambient space.  Generators are exact — coordinates
// are rationals — so downstream statistics can freeze equalities, not
// approximations.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "plegma/core.hpp"
#include "plegma/engines.hpp"
#include "plegma/fin_subset.hpp"
#include "plegma/rational.hpp"
#include "plegma/sparse_vec.hpp"

namespace plegma {

template <class Index>
struct KSeq {
  int k = 1;                                                // arity
  std::string name;                                         // for reports
  std::function<SparseVec<Index>(const FinSubset&)> at;     // s |-> x_s
  std::shared_ptr<const NormEngine<Index>> engine;          // ambient norm

  SparseVec<Index> operator()(const FinSubset& s) const {
    if (s.size() != k)
      throw InvalidInput(name + ": index must be a " + std::to_string(k) +
                         "-subset, got " + s.to_string());
    return at(s);
  }
  NormValue norm_at(const FinSubset& s) const { return engine->norm((*this)(s)); }
};

// Empirical boundedness check: max ambient norm over the plegma-free sample
// of all k-subsets of {1..horizon} (capped), reported as an upper enclosure.
template <class Index>
inline double sampled_bound(const KSeq<Index>& x, int horizon, long long cap = 2000) {
  double best = 0.0;
  long long seen = 0;
  for_each_subset(Universe::initial_segment(horizon), x.k, [&](const FinSubset& s) {
    best = std::max(best, x.engine->norm(x.at(s)).hi);
    return ++seen < cap;
  });
  return best;
}

// ---------------------------------------------------------------------------
// Primitive generators
// ---------------------------------------------------------------------------

// The subset basis: s |-> e_s.  The natural k-sequence of the regular-family
// spaces; with the Schreier-plegmatic engine this is the X_2 / X_3 basis.
inline KSeq<FinSubset> basis_seq(int k, std::shared_ptr<const NormEngine<FinSubset>> engine) {
  if (k < 1) throw InvalidInput("basis_seq: arity must be >= 1");
  KSeq<FinSubset> out;
  out.k = k;
  out.name = "basis" + std::to_string(k);
  out.engine = std::move(engine);
  out.at = [](const FinSubset& s) { return SubsetVec::unit(s); };
  return out;
}

// The summing 2-sequence in c_0: x_s = sum of e_n over the closed interval
// s(1) <= n <= s(2).
inline KSeq<int> summing_2seq() {
  KSeq<int> out;
  out.k = 2;
  out.name = "summing2";
  out.engine = std::make_shared<C0Engine>();
  out.at = [](const FinSubset& s) {
    IntVec v;
    for (int n = s.at1(1); n <= s.at1(2); ++n) v.set(n, Rational(1));
    return v;
  };
  return out;
}

// Closed form for the sup norm of a combination of summing vectors along a
// plegma l-tuple: with all left endpoints below all right endpoints, the
// running coordinate values are exactly the prefix sums (coordinates crossed
// left to right among the left endpoints) and the suffix sums (coordinates
// among the right endpoints), so the sup is max(max |prefix|, max |suffix|).
inline Rational summing_combination_sup(const std::vector<Rational>& a) {
  if (a.empty()) return Rational(0);
  Rational best(0), run(0);
  for (const Rational& c : a) {
    run += c;
    best = std::max(best, run.abs());
  }
  run = Rational(0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    run += *it;
    best = std::max(best, run.abs());
  }
  return best;
}

// ---------------------------------------------------------------------------
// Row bases and truncation
// ---------------------------------------------------------------------------

// A bounded sequence of rows r_n in l_inf, given coordinatewise.  Only the
// first `effective_width(n)` coordinates of row n can be nonzero-or-varying;
// beyond that the row is constant, equal to entry(n, effective_width(n)).
// (Both presets below are eventually constant, which keeps truncations and
// row combinations finitely computable.)
struct RowBase {
  std::string name;
  std::function<Rational(int n, int m)> entry;  // r_n(m)
  std::function<int(int n)> settle;             // row constant for m >= settle(n)
};

// Unit rows: r_n = e_n (the c_0 basis).
inline RowBase unit_rows() {
  RowBase b;
  b.name = "unit";
  b.entry = [](int n, int m) { return Rational(n == m ? 1 : 0); };
  b.settle = [](int n) { return n + 1; };
  return b;
}

// Summing rows: r_n(m) = 1 for m >= n, else 0.
inline RowBase summing_rows() {
  RowBase b;
  b.name = "summing";
  b.entry = [](int n, int m) { return Rational(m >= n ? 1 : 0); };
  b.settle = [](int n) { return n; };
  return b;
}

// Truncation 2-sequence over a row base: x_s = row s(1) cut off after
// coordinate s(2) (coordinates m <= s(2) kept, the rest zeroed).  With unit
// rows this is e_{s(1)}; with summing rows it is the indicator of
// [s(1), s(2)], i.e. the summing 2-sequence again.
inline KSeq<int> truncation_2seq(RowBase base) {
  KSeq<int> out;
  out.k = 2;
  out.name = "trunc-" + base.name;
  out.engine = std::make_shared<C0Engine>();
  auto b = std::make_shared<RowBase>(std::move(base));
  out.at = [b](const FinSubset& s) {
    IntVec v;
    for (int m = 1; m <= s.at1(2); ++m) {
      Rational c = b->entry(s.at1(1), m);
      if (!c.is_zero()) v.set(m, c);
    }
    return v;
  };
  return out;
}

// Sup norm of sum a_i * row_i over rows first..first+a.size()-1.  Exact:
// the rows are eventually constant, so the sup over all coordinates equals
// the max over m up to the largest settle point.
inline Rational row_combination_sup(const RowBase& base, const std::vector<Rational>& a,
                                    int first = 1) {
  int l = (int)a.size();
  int hi = 0;
  for (int i = 0; i < l; ++i) hi = std::max(hi, base.settle(first + i));
  Rational best(0);
  for (int m = 1; m <= hi; ++m) {
    Rational coord(0);
    for (int i = 0; i < l; ++i) coord += a[i] * base.entry(first + i, m);
    best = std::max(best, coord.abs());
  }
  return best;
}

// Two-sided enclosure for the value of a truncation 2-sequence combination
// along any plegma l-tuple: the combination of full rows from below, the
// worst tail combination from above.
struct RowSandwich {
  Rational lower;  // sup norm of sum a_i row_i
  Rational upper;  // max over j of sup norm of sum_{i>=j} a_i row_i
};
inline RowSandwich row_sandwich(const RowBase& base, const std::vector<Rational>& a) {
  RowSandwich out;
  out.lower = row_combination_sup(base, a);
  out.upper = Rational(0);
  for (size_t j = 0; j < a.size(); ++j) {
    std::vector<Rational> tail(a.begin() + j, a.end());
    out.upper = std::max(out.upper, row_combination_sup(base, tail, (int)j + 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lifting and composition
// ---------------------------------------------------------------------------

// Lift a k1-sequence to arity k2 >= k1 by restricting the index to its first
// k1 entries: x_s = w_{s|k1}.
template <class Index>
inline KSeq<Index> lift_seq(const KSeq<Index>& w, int k2) {
  if (k2 < w.k) throw InvalidInput("lift_seq: target arity below source arity");
  KSeq<Index> out;
  out.k = k2;
  out.name = w.name + "^lift" + std::to_string(k2);
  out.engine = w.engine;
  int k1 = w.k;
  auto inner = w.at;
  out.at = [inner, k1](const FinSubset& s) { return inner(s.prefix(k1)); };
  return out;
}

// A block pattern t |-> y_t, the coefficient data of a d-sequence of finitely
// supported vectors.  Used as the outer layer of a composition; the supports
// must be plegma-ordered along plegma tuples (checked on a sample).
using BlockPattern = std::function<IntVec(const FinSubset&)>;

// Pattern for y_t = e_{2t-1} + e_{2t} (d = 1), the standard doubling data.
inline BlockPattern doubling_pattern() {
  return [](const FinSubset& t) {
    IntVec v;
    v.set(2 * t.at1(1) - 1, Rational(1));
    v.set(2 * t.at1(1), Rational(1));
    return v;
  };
}

// Composition z = y * x of a d-dimensional block pattern with a k-sequence:
// for v in [N]^{k+d} split v = (t, s) into its first d and last k entries,
// let F = supp y_t with coefficients a, and set
//
//   z_v = sum_{j=1}^{|F|} a(F(j)) * x_{s + (j-1)},
//
// where s + c shifts every entry of s by c (the diagonal translates of s,
// which stay plegma as a tuple).  The pattern is validated on a sample of
// plegma pairs: supports must be finite, nonzero, and block-ordered.
template <class Index>
inline KSeq<Index> compose_seq(const KSeq<Index>& x, const BlockPattern& y, int d,
                               int validation_horizon = 8) {
  if (d < 1) throw InvalidInput("compose_seq: pattern dimension must be >= 1");
  // Sample check: along plegma pairs the pattern supports must come in blocks.
  Universe u = Universe::initial_segment(validation_horizon);
  bool ok = true;
  std::string why;
  for_each_plegma(u, d, 2, [&](const PlegmaTuple& pair) {
    IntVec y1 = y(pair[0]), y2 = y(pair[1]);
    if (y1.empty() || y2.empty()) {
      ok = false;
      why = "pattern vanishes at " + (y1.empty() ? pair[0] : pair[1]).to_string();
      return false;
    }
    if (!support_before(y1, y2)) {
      ok = false;
      why = "pattern supports not block-ordered across the plegma pair " +
            pair[0].to_string() + ", " + pair[1].to_string();
      return false;
    }
    return true;
  });
  if (!ok) throw InvalidInput("compose_seq: " + why);

  KSeq<Index> out;
  out.k = x.k + d;
  out.name = x.name + "*pattern";
  out.engine = x.engine;
  int k = x.k;
  auto inner = x.at;
  out.at = [inner, y, d, k](const FinSubset& v) {
    std::vector<int> tpos(d), spos(k);
    for (int i = 0; i < d; ++i) tpos[i] = i + 1;
    for (int i = 0; i < k; ++i) spos[i] = d + i + 1;
    FinSubset t = v.at_positions(tpos);
    FinSubset s = v.at_positions(spos);
    IntVec pat = y(t);
    SparseVec<Index> z;
    int j = 0;
    for (const auto& [coord, a] : pat) {
      (void)coord;
      std::vector<int> shifted(k);
      for (int i = 0; i < k; ++i) shifted[i] = s.at1(i + 1) + j;
      SparseVec<Index> piece = inner(FinSubset(std::move(shifted)));
      piece *= a;
      z += piece;
      ++j;
    }
    return z;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Convex renorming
// ---------------------------------------------------------------------------

struct RenormParams {
  std::vector<Rational> b;  // convex-ish weights, sum of |b_i| must be 1
  Rational c;               // lower norm estimate for the averaged blocks
  Rational eps_prime;       // additive slack around c
  Rational eps;             // target defect: scaled value must stay >= 1-eps
};

// Renormalized sequence y over a universe M: for each index s, form the p
// interleaved plegma tuples t_i(j) = M(p*s(j) + i - 1) (i = 1..p), and set
//
//   y_s = ( sum_i b_i * x_{t_i} ) / (c + 2*eps_prime).
//
// Requires p*s(k) + p - 1 <= |M|; indices beyond that throw on evaluation.
template <class Index>
inline KSeq<Index> l1_renorm(const KSeq<Index>& x, const RenormParams& params,
                             Universe m) {
  int p = (int)params.b.size();
  if (p < 1) throw InvalidInput("l1_renorm: need at least one weight");
  Rational total(0);
  for (const Rational& w : params.b) total += w.abs();
  if (total != Rational(1))
    throw InvalidInput("l1_renorm: weights must have absolute values summing to 1, got " +
                       total.to_string());
  if (!(params.c > Rational(0)) || !(params.eps_prime > Rational(0)))
    throw InvalidInput("l1_renorm: c and the slack must be positive");
  if (!(params.eps > Rational(0)) || !(params.eps < Rational(1)))
    throw InvalidInput("l1_renorm: target defect must lie strictly between 0 and 1");
  // The scaled lower estimate must clear the target: (c - e') / (c + 2e') >= 1 - eps.
  Rational lhs = params.c - params.eps_prime;
  Rational rhs = (Rational(1) - params.eps) * (params.c + Rational(2) * params.eps_prime);
  if (lhs < rhs)
    throw InvalidInput(
        "l1_renorm: slack too large for the target defect: need (c - slack) >= "
        "(1 - defect) * (c + 2*slack), got " +
        lhs.to_string() + " < " + rhs.to_string());

  KSeq<Index> out;
  out.k = x.k;
  out.name = x.name + "^renorm";
  out.engine = x.engine;
  int k = x.k;
  auto inner = x.at;
  Rational scale = Rational(1) / (params.c + Rational(2) * params.eps_prime);
  auto b = params.b;
  out.at = [inner, b, p, k, m, scale](const FinSubset& s) {
    SparseVec<Index> acc;
    for (int i = 1; i <= p; ++i) {
      std::vector<int> t(k);
      for (int j = 1; j <= k; ++j) t[j - 1] = m.at1(p * s.at1(j) + i - 1);
      SparseVec<Index> piece = inner(FinSubset(std::move(t)));
      piece *= b[i - 1];
      acc += piece;
    }
    acc *= scale;
    return acc;
  };
  return out;
}

// The interleaved tuples used by l1_renorm at index s, exposed so callers can
// inspect/verify them: t_i(j) = M(p*s(j) + i - 1).  Each t_i is plegma as a
// p-tuple when read across i (columns interleave within consecutive blocks).
inline PlegmaTuple renorm_inner_tuples(int p, const FinSubset& s, const Universe& m) {
  if (p < 1) throw InvalidInput("renorm_inner_tuples: need p >= 1");
  PlegmaTuple out;
  for (int i = 1; i <= p; ++i) {
    std::vector<int> t(s.size());
    for (int j = 1; j <= s.size(); ++j) t[j - 1] = m.at1(p * s.at1(j) + i - 1);
    out.push_back(FinSubset(std::move(t)));
  }
  return out;
}

}  // namespace plegma
