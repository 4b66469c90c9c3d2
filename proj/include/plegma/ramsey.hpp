#pragma once

// Finite Ramsey-type searches over plegma families.
//
// Plegma l-tuples in [L]^k correspond to kl-subsets of L (their flats), so
// monochromatization is hypergraph Ramsey search on flats. All searches are
// exhaustive with pruning and return lexicographically least witnesses, which
// keeps outputs reproducible byte for byte.

#include <functional>
#include <map>

#include "core.hpp"
#include "rational.hpp"

namespace plegma {

using TupleColoring = std::function<int(const PlegmaTuple&)>;
using SubsetLabeling = std::function<int(const FinSubset&)>;

// ---------------------------------------------------------------------------
// monochromatize
// ---------------------------------------------------------------------------

// Least L inside U with |L| = target_size such that the coloring is constant
// on all plegma l-tuples in [L]^k. DFS over universe elements; every flat
// completed by a new element must match the color committed by the first
// complete flat.
inline std::optional<std::vector<int>> monochromatize(const Universe& u, int k, int l,
                                                      const TupleColoring& color,
                                                      int target_size) {
  int flat_size = k * l;
  if (target_size < flat_size)
    throw InvalidInput("monochromatize: target_size below one flat");
  std::vector<int> all = u.elements();
  std::vector<int> chosen;
  int committed = -1;  // color of the first completed flat, -1 = none yet

  auto new_flats_ok = [&](int cand) {
    // Flats inside chosen+cand that contain cand = (flat_size-1)-subsets of chosen.
    if ((int)chosen.size() < flat_size - 1) return true;
    Universe prev = Universe::explicit_set(chosen);
    bool ok = true;
    int first_seen = committed;
    for_each_subset(prev, flat_size - 1, [&](const FinSubset& part) {
      FinSubset flat = part.with(cand);
      int c = color(plegma_from_flat(flat, k, l));
      if (first_seen < 0) first_seen = c;
      if (c != first_seen) {
        ok = false;
        return false;
      }
      return true;
    });
    if (ok && committed < 0) committed = first_seen;  // caller restores on backtrack
    return ok;
  };

  std::function<bool(size_t)> dfs = [&](size_t start) {
    if ((int)chosen.size() == target_size) return true;
    for (size_t i = start; i < all.size(); ++i) {
      if ((int)(all.size() - i) < target_size - (int)chosen.size()) break;
      int saved = committed;
      if (!new_flats_ok(i < all.size() ? (int)all[i] : 0)) {
        committed = saved;
        continue;
      }
      chosen.push_back(all[i]);
      if (dfs(i + 1)) return true;
      chosen.pop_back();
      committed = saved;
    }
    return false;
  };
  if (dfs(0)) return chosen;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// dichotomy_search
// ---------------------------------------------------------------------------

struct DichotomyResult {
  enum class Kind { kConstant, kInjectiveOnPlegmaPairs } kind;
  std::vector<int> sub_universe;
  int label = -1;  // the common label for the constant alternative
};

namespace detail {

// Largest L (ties: lexicographically least) such that `admits` accepts every
// new element against the current partial set. `admits(partial, cand)` must be
// hereditary: acceptance cannot be broken by removing elements.
inline std::vector<int> max_hereditary_subset(
    const std::vector<int>& all,
    const std::function<bool(const std::vector<int>&, int)>& admits) {
  std::vector<int> best, chosen;
  std::function<void(size_t)> dfs = [&](size_t start) {
    if (chosen.size() > best.size()) best = chosen;
    for (size_t i = start; i < all.size(); ++i) {
      if (chosen.size() + (all.size() - i) <= best.size()) break;  // bound
      if (!admits(chosen, all[i])) continue;
      chosen.push_back(all[i]);
      dfs(i + 1);
      chosen.pop_back();
    }
  };
  dfs(0);
  return best;
}

}  // namespace detail

// Either a sub-universe where the labeling is constant on [L]^k, or one where
// plegma pairs always receive different labels; the larger alternative wins
// (constant wins ties). Certificates are re-verified before returning.
inline DichotomyResult dichotomy_search(const Universe& u, int k,
                                        const SubsetLabeling& label) {
  std::vector<int> all = u.elements();

  // Alternative A: constant on [L]^k. Try per label value seen on [U]^k.
  std::map<int, bool> labels;
  for_each_subset(u, k, [&](const FinSubset& s) {
    labels[label(s)] = true;
    return true;
  });
  std::vector<int> best_const;
  int best_label = -1;
  for (auto& [value, _] : labels) {
    auto admits = [&](const std::vector<int>& partial, int cand) {
      if ((int)partial.size() + 1 < k) return true;
      std::vector<int> pool = partial;
      pool.push_back(cand);
      std::sort(pool.begin(), pool.end());
      Universe sub = Universe::explicit_set(pool);
      bool ok = true;
      for_each_subset(sub, k, [&](const FinSubset& s) {
        if (!s.contains(cand)) return true;
        if (label(s) != value) {
          ok = false;
          return false;
        }
        return true;
      });
      return ok;
    };
    auto found = detail::max_hereditary_subset(all, admits);
    if (found.size() > best_const.size()) {
      best_const = found;
      best_label = value;
    }
  }

  // Alternative B: plegma pairs always differ.
  auto admits_diff = [&](const std::vector<int>& partial, int cand) {
    if ((int)partial.size() + 1 < 2 * k) return true;
    std::vector<int> pool = partial;
    pool.push_back(cand);
    std::sort(pool.begin(), pool.end());
    Universe sub = Universe::explicit_set(pool);
    bool ok = true;
    for_each_plegma(sub, k, 2, [&](const PlegmaTuple& pair) {
      if (!pair[0].contains(cand) && !pair[1].contains(cand)) return true;
      if (label(pair[0]) == label(pair[1])) {
        ok = false;
        return false;
      }
      return true;
    });
    return ok;
  };
  std::vector<int> best_diff = detail::max_hereditary_subset(all, admits_diff);

  DichotomyResult res;
  if (best_const.size() >= best_diff.size()) {
    res.kind = DichotomyResult::Kind::kConstant;
    res.sub_universe = best_const;
    res.label = best_label;
    Universe sub = Universe::explicit_set(res.sub_universe);
    for_each_subset(sub, k, [&](const FinSubset& s) {
      if (label(s) != res.label)
        throw std::logic_error("dichotomy_search: constant certificate failed");
      return true;
    });
  } else {
    res.kind = DichotomyResult::Kind::kInjectiveOnPlegmaPairs;
    res.sub_universe = best_diff;
    Universe sub = Universe::explicit_set(res.sub_universe);
    for_each_plegma(sub, k, 2, [&](const PlegmaTuple& pair) {
      if (label(pair[0]) == label(pair[1]))
        throw std::logic_error("dichotomy_search: difference certificate failed");
      return true;
    });
  }
  return res;
}

// ---------------------------------------------------------------------------
// find_plegma_in_subset / largest_plegma_free
// ---------------------------------------------------------------------------

// First (lexicographically) plegma l-tuple whose members all lie in A.
// Members of a plegma tuple are pairwise plegma pairs in a forced order, so a
// depth-first chain extension with full pairwise checks is exhaustive.
inline std::optional<PlegmaTuple> find_plegma_in_subset(std::vector<FinSubset> a,
                                                        int l) {
  if (l < 1) throw InvalidInput("find_plegma_in_subset: l must be >= 1");
  if (a.empty()) return std::nullopt;
  for (const auto& s : a)
    if (s.size() != a[0].size())
      throw InvalidInput("find_plegma_in_subset: mixed cardinalities");
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::vector<int> chain;
  std::function<bool(size_t)> dfs = [&](size_t start) {
    if ((int)chain.size() == l) return true;
    for (size_t i = start; i < a.size(); ++i) {
      bool ok = true;
      for (int j : chain)
        if (!is_plegma_pair(a[j], a[i])) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chain.push_back((int)i);
      if (dfs(i + 1)) return true;
      chain.pop_back();
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  PlegmaTuple out;
  for (int j : chain) out.push_back(a[j]);
  return out;
}

struct FreeSetResult {
  int size = 0;
  std::vector<FinSubset> witness;
};

// Maximum A inside [{1..n}]^k containing no plegma l-tuple. Branch and bound
// over k-subsets in lexicographic order; including a vertex is blocked when it
// completes an l-element pairwise-plegma chain inside the chosen set.
inline FreeSetResult largest_plegma_free(int n, int k, int l,
                                         long long vertex_cap = 4000) {
  if (n < 1 || k < 1 || l < 2)
    throw InvalidInput("largest_plegma_free: need n,k >= 1 and l >= 2");
  long long vcount = binomial(n, k);
  if (vcount > vertex_cap)
    throw ScaleRefusal("largest_plegma_free: " + std::to_string(vcount) +
                       " vertices exceeds cap " + std::to_string(vertex_cap));
  std::vector<FinSubset> verts;
  verts.reserve((size_t)vcount);
  for_each_subset(Universe::initial_segment(n), k, [&](const FinSubset& s) {
    verts.push_back(s);
    return true;
  });
  int v = (int)verts.size();
  // Adjacency of the plegma-pair relation (edges go lexicographically forward).
  std::vector<std::vector<char>> edge(v, std::vector<char>(v, 0));
  for (int i = 0; i < v; ++i)
    for (int j = i + 1; j < v; ++j)
      if (is_plegma_pair(verts[i], verts[j])) edge[i][j] = edge[j][i] = 1;

  std::vector<int> chosen, best;
  // Does `pool` contain a clique of `need` vertices? Pairwise plegma
  // l-cliques are exactly plegma l-tuples, so this decides tuple containment.
  std::function<bool(const std::vector<int>&, int)> has_clique =
      [&](const std::vector<int>& pool, int need) {
        if (need == 0) return true;
        if ((int)pool.size() < need) return false;
        for (size_t i = 0; i + need <= pool.size(); ++i) {
          std::vector<int> next;
          for (size_t j = i + 1; j < pool.size(); ++j)
            if (edge[pool[i]][pool[j]]) next.push_back(pool[j]);
          if (has_clique(next, need - 1)) return true;
        }
        return false;
      };
  auto blocked = [&](int cand) {
    std::vector<int> nbrs;
    for (int c : chosen)
      if (edge[c][cand]) nbrs.push_back(c);
    return has_clique(nbrs, l - 1);
  };
  std::function<void(int)> dfs = [&](int start) {
    if (chosen.size() > best.size()) best = chosen;
    for (int i = start; i < v; ++i) {
      if (chosen.size() + (size_t)(v - i) <= best.size()) break;
      if (blocked(i)) continue;
      chosen.push_back(i);
      dfs(i + 1);
      chosen.pop_back();
    }
  };
  dfs(0);
  FreeSetResult res;
  res.size = (int)best.size();
  for (int i : best) res.witness.push_back(verts[i]);
  return res;
}

// ---------------------------------------------------------------------------
// density_threshold_scan
// ---------------------------------------------------------------------------

struct DensityRow {
  int n;
  long long total;        // C(n, k)
  int largest_free;
  Rational bound;         // delta * C(n, k)
  bool dense_enough;      // largest_free < floor(delta * C(n,k))
};

struct DensityScanResult {
  int k, l;
  Rational delta;
  int n_max;
  std::vector<DensityRow> rows;
  std::optional<int> threshold_n;
  // Free subset of size floor(delta*C) at threshold_n - 1: the witness that
  // the threshold is minimal.
  std::vector<FinSubset> counterexample;
};

// Minimal n <= n_max such that every subset of [{1..n}]^k with at least
// floor(delta * C(n,k)) members contains a plegma l-tuple, decided through the
// exact largest_plegma_free value per n. Exact rational comparisons; for k = 1
// this threshold equals ceil(l / delta).
inline DensityScanResult density_threshold_scan(int k, int l, const Rational& delta,
                                                int n_max,
                                                long long vertex_cap = 4000) {
  if (delta <= Rational(0) || delta > Rational(1))
    throw InvalidInput("density_threshold_scan: delta must be in (0, 1]");
  DensityScanResult out;
  out.k = k;
  out.l = l;
  out.delta = delta;
  out.n_max = n_max;
  std::vector<FinSubset> prev_witness;
  for (int n = k; n <= n_max; ++n) {
    auto free_set = largest_plegma_free(n, k, l, vertex_cap);
    long long total = binomial(n, k);
    Rational bound = delta * Rational(total);
    bool dense = free_set.size < bound.floor();
    out.rows.push_back({n, total, free_set.size, bound, dense});
    if (dense) {
      out.threshold_n = n;
      out.counterexample = prev_witness;
      break;
    }
    // Tuple-free set meeting the bound: proves n is still below threshold.
    prev_witness = free_set.witness;
    prev_witness.resize(std::min<size_t>(prev_witness.size(),
                                         (size_t)std::max<long long>(bound.floor(), 0)));
  }
  return out;
}

}  // namespace plegma
