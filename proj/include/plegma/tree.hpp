#pragma once

// Canonical tree decompositions.
//
// A TreeMap assigns a finitely supported vector to every node of the tree
// [M]^{<=k} (all subsets of the universe M of size at most k, including the
// empty root).  Thinking of the value at a full branch s as x_s, the value at
// a shorter node t as the "partial limit" along branches through t, the
// difference map w_t = phi(t) - phi(parent t) isolates what each node adds.
//
// canonical_tree_extract compresses each difference to a minimal interval
// carrying all but a vanishing share of its mass, then thins the universe
// until the compressed pieces satisfy the support-ordering conditions below,
// producing per-branch approximants
//
//   x~_s = y_0 + y_{s|1} + ... + y_{s|k}
//
// with certified error bounds.  verify_ctd re-checks every condition from
// scratch, so serialized decompositions can be audited independently.

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
#include "plegma/ramsey.hpp"
#include "plegma/rational.hpp"
#include "plegma/sparse_vec.hpp"

namespace plegma {

// ---------------------------------------------------------------------------
// Tree maps
// ---------------------------------------------------------------------------

struct TreeMap {
  int k = 1;
  Universe m = Universe::initial_segment(0);
  std::map<FinSubset, IntVec> node;  // one entry per t in [M]^{<=k}, incl. {}

  const IntVec& at(const FinSubset& t) const {
    auto it = node.find(t);
    if (it == node.end())
      throw InvalidInput("TreeMap: no value at node " + t.to_string());
    return it->second;
  }

  // Every node of [M]^{<=k} must be present (values may be zero vectors).
  void validate() const {
    if (k < 1) throw InvalidInput("TreeMap: depth must be >= 1");
    if (node.find(FinSubset{}) == node.end())
      throw InvalidInput("TreeMap: missing root value");
    for (int j = 1; j <= k; ++j) {
      for_each_subset(m, j, [&](const FinSubset& t) {
        if (node.find(t) == node.end())
          throw InvalidInput("TreeMap: missing value at node " + t.to_string());
        return true;
      });
    }
  }
};

// Difference map: w_{} = phi({}), w_t = phi(t) - phi(t minus its max).
inline std::map<FinSubset, IntVec> tree_differences(const TreeMap& tm) {
  std::map<FinSubset, IntVec> w;
  for (const auto& [t, v] : tm.node) {
    if (t.empty())
      w[t] = v;
    else
      w[t] = v - tm.at(t.drop_max());
  }
  return w;
}

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

struct CanonicalTreeDecomposition {
  int k = 1;
  Universe l = Universe::initial_segment(0);  // thinned universe L
  std::map<FinSubset, IntVec> y;              // t in [L]^{<=k} -> compressed piece

  const IntVec& piece(const FinSubset& t) const {
    auto it = y.find(t);
    if (it == y.end())
      throw InvalidInput("decomposition: no piece at node " + t.to_string());
    return it->second;
  }

  // The branch approximant x~_s = sum of pieces along the chain of prefixes.
  IntVec approx(const FinSubset& s) const {
    if (s.size() != k)
      throw InvalidInput("decomposition: approx wants a full branch of length " +
                         std::to_string(k));
    IntVec out;
    for (int j = 0; j <= k; ++j) out += piece(s.prefix(j));
    return out;
  }
};

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

struct ExtractParams {
  int target_size = 6;  // desired |L|
  // Per-scale tolerance schedule; eps(n) bounds the error of branches whose
  // minimum sits at position n of L.  Decreasing by construction.
  std::function<Rational(int)> eps = [](int n) {
    return Rational(1, 1LL << std::min(n, 40));
  };
};

struct BranchError {
  FinSubset s;
  Rational claimed;  // tolerance the construction promises
  double achieved;   // upper enclosure of the ambient norm of x_s - x~_s
};

struct ExtractResult {
  CanonicalTreeDecomposition ctd;
  bool complete = false;  // reached target_size
  std::vector<BranchError> branch_errors;
};

namespace detail {

// Smallest support window of w whose complement has ambient norm < tol;
// returns the restricted vector.  Ties broken leftmost.  Always succeeds:
// the full support window has zero complement.
inline IntVec minimal_interval_part(const IntVec& w, const NormEngine<int>& engine,
                                    const Rational& tol) {
  double t = tol.to_double();
  if (engine.norm(w).hi < t) return IntVec{};  // nothing worth keeping
  std::vector<int> pts;
  for (const auto& [i, c] : w) {
    (void)c;
    pts.push_back(i);
  }
  int d = (int)pts.size();
  for (int len = 1; len <= d; ++len) {
    for (int a = 0; a + len <= d; ++a) {
      IntVec kept = restrict_interval(w, pts[a], pts[a + len - 1]);
      if (engine.norm(w - kept).hi < t) return kept;
    }
  }
  return w;  // unreachable; complement of the full window is zero
}

}  // namespace detail

// Support-ordering conditions on the compressed pieces, for a candidate set
// of universe elements.  Checked from scratch (the candidate sets involved
// are small); `pieces` must cover every node drawn from `elems`.
inline bool ctd_conditions_hold(const std::vector<int>& elems, int k,
                                const std::map<FinSubset, IntVec>& pieces,
                                std::string* why = nullptr) {
  Universe u = Universe::explicit_set(elems);
  auto piece = [&](const FinSubset& t) -> const IntVec& {
    auto it = pieces.find(t);
    if (it == pieces.end())
      throw InvalidInput("ctd_conditions_hold: missing piece at " + t.to_string());
    return it->second;
  };
  bool ok = true;
  // Branch condition: along any (partial) branch the pieces come in blocks,
  // the root piece first.
  for (int j = 1; j <= std::min(k, (int)elems.size()); ++j) {
    for_each_subset(u, j, [&](const FinSubset& s) {
      for (int j1 = 0; ok && j1 < j; ++j1)
        for (int j2 = j1 + 1; ok && j2 <= j; ++j2)
          if (!support_before(piece(s.prefix(j1)), piece(s.prefix(j2)))) {
            ok = false;
            if (why)
              *why = "branch pieces out of order at " + s.to_string() + " levels " +
                     std::to_string(j1) + "," + std::to_string(j2);
          }
      return ok;
    });
    if (!ok) return false;
  }
  // Pair conditions: across a plegma pair (s1, s2) of j-subsets the nonroot
  // pieces interleave: level j1 of s1 precedes level j2 of s2 when j1 <= j2,
  // and level j1 of s2 precedes level j2 of s1 when j1 < j2.
  for (int j = 1; j <= std::min(k, (int)elems.size() / 2); ++j) {
    for_each_plegma(u, j, 2, [&](const PlegmaTuple& pr) {
      for (int j1 = 1; ok && j1 <= j; ++j1)
        for (int j2 = j1; ok && j2 <= j; ++j2) {
          if (!support_before(piece(pr[0].prefix(j1)), piece(pr[1].prefix(j2)))) {
            ok = false;
            if (why)
              *why = "pair pieces out of order: " + pr[0].to_string() + " level " +
                     std::to_string(j1) + " vs " + pr[1].to_string() + " level " +
                     std::to_string(j2);
          }
          if (ok && j1 < j2 &&
              !support_before(piece(pr[1].prefix(j1)), piece(pr[0].prefix(j2)))) {
            ok = false;
            if (why)
              *why = "pair pieces out of order: " + pr[1].to_string() + " level " +
                     std::to_string(j1) + " vs " + pr[0].to_string() + " level " +
                     std::to_string(j2);
          }
        }
      return ok;
    });
    if (!ok) return false;
  }
  return ok;
}

inline ExtractResult canonical_tree_extract(const TreeMap& tm,
                                            const NormEngine<int>& engine,
                                            const ExtractParams& params) {
  tm.validate();
  if (params.target_size < tm.k)
    throw InvalidInput("canonical_tree_extract: target universe smaller than depth");

  // Compress every difference to its minimal dominant interval.  The
  // tolerance at node t is eps(n)/k where n is the position in M of max t;
  // positions only grow under thinning, so the budget stays valid for any
  // sub-universe we end up with.
  auto w = tree_differences(tm);
  std::map<FinSubset, IntVec> pieces;
  for (const auto& [t, wt] : w) {
    if (t.empty()) {
      pieces[t] = wt;  // root kept exact
      continue;
    }
    auto pos = tm.m.index_of(t.max());
    if (!pos) throw InvalidInput("canonical_tree_extract: node outside universe");
    Rational tol = params.eps(*pos) / Rational(tm.k);
    pieces[t] = detail::minimal_interval_part(wt, engine, tol);
  }

  // Thin the universe until the support-ordering conditions hold.
  std::vector<int> all = tm.m.elements();
  auto admits = [&](const std::vector<int>& partial, int cand) {
    std::vector<int> trial = partial;
    trial.push_back(cand);
    std::sort(trial.begin(), trial.end());
    return ctd_conditions_hold(trial, tm.k, pieces);
  };
  std::vector<int> chosen = detail::max_hereditary_subset(all, admits);

  ExtractResult out;
  out.complete = (int)chosen.size() >= params.target_size;
  if ((int)chosen.size() > params.target_size) chosen.resize(params.target_size);

  out.ctd.k = tm.k;
  out.ctd.l = Universe::explicit_set(chosen);
  out.ctd.y[FinSubset{}] = pieces.at(FinSubset{});
  for (int j = 1; j <= std::min(tm.k, (int)chosen.size()); ++j) {
    for_each_subset(out.ctd.l, j, [&](const FinSubset& t) {
      out.ctd.y[t] = pieces.at(t);
      return true;
    });
  }

  // Certified per-branch errors: each of the k+1 pieces along the branch was
  // truncated by less than eps(pos of max prefix)/k <= eps(pos of min s)/k in
  // M-position, and L-positions are no larger.
  if ((int)chosen.size() >= tm.k) {
    for_each_subset(out.ctd.l, tm.k, [&](const FinSubset& s) {
      BranchError row;
      row.s = s;
      int n = *out.ctd.l.index_of(s.min());
      row.claimed = params.eps(n);
      row.achieved = engine.norm(tm.at(s) - out.ctd.approx(s)).hi;
      out.branch_errors.push_back(row);
      return true;
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct CtdReport {
  bool ok = true;
  std::string violation;
};

// Interval-restriction identity across a plegma tuple: for each level j, the
// window spanning the level-j pieces of all members cuts exactly those pieces
// out of the rootless approximants.
inline bool trocan_interval_identity(const CanonicalTreeDecomposition& ctd,
                                     const PlegmaTuple& tuple, int j,
                                     std::string* why = nullptr) {
  int lo = 0, hi = 0;
  bool seen = false;
  for (const FinSubset& s : tuple) {
    const IntVec& p = ctd.piece(s.prefix(j));
    if (p.empty()) continue;
    int a = min_support(p), b = max_support(p);
    if (!seen) {
      lo = a;
      hi = b;
      seen = true;
    } else {
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
  }
  if (!seen) return true;  // all pieces empty at this level: nothing to cut
  const IntVec& root = ctd.piece(FinSubset{});
  for (const FinSubset& s : tuple) {
    IntVec rootless = ctd.approx(s) - root;
    if (restrict_interval(rootless, lo, hi) != ctd.piece(s.prefix(j))) {
      if (why)
        *why = "window [" + std::to_string(lo) + "," + std::to_string(hi) +
               "] at level " + std::to_string(j) + " does not cut the piece of " +
               s.to_string();
      return false;
    }
  }
  return true;
}

// Full audit of a decomposition: piece completeness, branch block-order,
// pair interleaving, disjointness of rootless approximants across plegma
// tuples, and the interval-restriction identity.  Stops at the first
// violation and reports it.
inline CtdReport verify_ctd(const CanonicalTreeDecomposition& ctd,
                            int tuple_length_cap = 3) {
  CtdReport rep;
  std::vector<int> elems = ctd.l.elements();
  // Completeness.
  if (ctd.y.find(FinSubset{}) == ctd.y.end())
    return {false, "missing root piece"};
  for (int j = 1; j <= std::min(ctd.k, (int)elems.size()); ++j) {
    bool ok = for_each_subset(ctd.l, j, [&](const FinSubset& t) {
      if (ctd.y.find(t) == ctd.y.end()) {
        rep = {false, "missing piece at node " + t.to_string()};
        return false;
      }
      return true;
    });
    if (!ok) return rep;
  }
  // Support-ordering conditions.
  std::string why;
  if (!ctd_conditions_hold(elems, ctd.k, ctd.y, &why)) return {false, why};
  // Disjointness and interval identity along plegma tuples.
  const IntVec& root = ctd.piece(FinSubset{});
  for (int len = 2; len <= tuple_length_cap; ++len) {
    bool ok = for_each_plegma(ctd.l, ctd.k, len, [&](const PlegmaTuple& tuple) {
      std::vector<IntVec> rootless;
      for (const FinSubset& s : tuple) rootless.push_back(ctd.approx(s) - root);
      for (size_t i = 0; i < rootless.size(); ++i)
        for (size_t j = i + 1; j < rootless.size(); ++j) {
          IntVec overlap = rootless[i].filter(
              [&](int c) { return !rootless[j].at(c).is_zero(); });
          if (!overlap.empty()) {
            rep = {false, "rootless approximants of " + tuple[i].to_string() +
                              " and " + tuple[j].to_string() + " overlap"};
            return false;
          }
        }
      for (int j = 1; j <= ctd.k; ++j) {
        if (!trocan_interval_identity(ctd, tuple, j, &why)) {
          rep = {false, why};
          return false;
        }
      }
      return true;
    });
    if (!ok) return rep;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

struct LayeredTreeParams {
  int k = 2;
  int universe_size = 6;
  int stride = 40;        // coordinate gap between node humps
  int tail_length = 8;    // geometric tail after each spike
  uint64_t seed = 1;
  // Optional misplaced element: nodes whose max equals this element dump
  // their hump into the region of their minimum instead, breaking the pair
  // conditions until thinning removes the element.
  std::optional<int> rogue;
};

// Random layered tree map: each node contributes a unit-height spike at a
// coordinate determined by its maximum element, followed by a geometric tail
// (ratio 1/2) of small rational coefficients.  Branch and pair conditions
// hold for every sub-universe by construction (hump position is strictly
// increasing in the node's max), so extraction succeeds at full size; tails
// are what the interval compression trims.
inline TreeMap layered_tree_map(const LayeredTreeParams& p) {
  if (p.k < 1 || p.universe_size < p.k)
    throw InvalidInput("layered_tree_map: need universe at least as deep as k");
  if (p.stride < p.tail_length + 4)
    throw InvalidInput("layered_tree_map: stride too small for the tails");
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<int> height_num(1, 6);
  std::uniform_int_distribution<int> tail_len(2, p.tail_length);
  std::uniform_int_distribution<int> sign(0, 1);

  TreeMap tm;
  tm.k = p.k;
  tm.m = Universe::initial_segment(p.universe_size);

  std::map<FinSubset, IntVec> w;
  IntVec root;
  root.set(1, Rational(1));
  root.set(2, Rational(height_num(rng), 7));
  w[FinSubset{}] = root;

  for (int j = 1; j <= p.k; ++j) {
    for_each_subset(tm.m, j, [&](const FinSubset& t) {
      int anchor = (p.rogue && t.max() == *p.rogue) ? t.min() : t.max();
      int base = p.stride * anchor;
      IntVec v;
      v.set(base, Rational(height_num(rng), 3));
      int tl = tail_len(rng);
      for (int i = 1; i <= tl; ++i) {
        Rational c(sign(rng) ? 1 : -1, 1LL << (i + 1));
        v.set(base + i, c);
      }
      w[t] = v;
      return true;
    });
  }

  // Accumulate differences into node values phi(t) = sum of w over prefixes.
  tm.node[FinSubset{}] = w[FinSubset{}];
  for (int j = 1; j <= p.k; ++j) {
    for_each_subset(tm.m, j, [&](const FinSubset& t) {
      tm.node[t] = tm.node[t.drop_max()] + w[t];
      return true;
    });
  }
  return tm;
}

}  // namespace plegma
