#pragma once

// Plegma families over a finite universe.
//
// A tuple (s_1, ..., s_l) of k-subsets is plegma when
//   (i)  each coordinate row increases:  s_1(i) < s_2(i) < ... < s_l(i),
//   (ii) consecutive coordinates interleave:  s_l(i) < s_1(i+1) for i < k.
// Equivalently all entries sorted give the "flat" word
//   s_1(1) ... s_l(1) s_1(2) ... s_l(2) ... s_l(k),
// which identifies plegma l-tuples in [M]^k with kl-subsets of M. Singleton
// tuples are always plegma, and in [M]^1 every increasing l-tuple is.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "fin_subset.hpp"

namespace plegma {

// ---------------------------------------------------------------------------
// Predicate and pairwise characterization
// ---------------------------------------------------------------------------

inline void require_uniform_cardinality(const PlegmaTuple& t) {
  for (size_t j = 0; j < t.size(); ++j) {
    if (t[j].empty()) throw InvalidInput("plegma: empty member subset");
    if (t[j].size() != t[0].size())
      throw InvalidInput("plegma: mixed member cardinalities");
  }
}

// The two-member case; (s, t) in this order.
inline bool is_plegma_pair(const FinSubset& s, const FinSubset& t) {
  if (s.size() != t.size() || s.empty())
    throw InvalidInput("plegma: mixed member cardinalities");
  int k = s.size();
  for (int i = 1; i <= k; ++i)
    if (s.at1(i) >= t.at1(i)) return false;
  for (int i = 1; i < k; ++i)
    if (t.at1(i) >= s.at1(i + 1)) return false;
  return true;
}

inline bool is_plegma(const PlegmaTuple& tuple) {
  if (tuple.empty()) throw InvalidInput("plegma: empty tuple");
  require_uniform_cardinality(tuple);
  int k = tuple[0].size();
  int l = (int)tuple.size();
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j < l; ++j)
      if (tuple[j - 1].at1(i) >= tuple[j].at1(i)) return false;
  for (int i = 1; i < k; ++i)
    if (tuple[l - 1].at1(i) >= tuple[0].at1(i + 1)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Flat bijection
// ---------------------------------------------------------------------------

enum class FlatFormula {
  kColumnMajor,  // s_j(i) = F((i-1)l + j): bijective for all k, l
  kLegacyRowStep // s_j(i) = F((i-1)k + j): coincides with the above only when l = k
};

// Split a kl-subset F into the plegma l-tuple it encodes.
inline PlegmaTuple plegma_from_flat(const FinSubset& flat, int k, int l,
                                    FlatFormula formula = FlatFormula::kColumnMajor) {
  if (k < 1 || l < 1) throw InvalidInput("plegma_from_flat: k and l must be >= 1");
  if (flat.size() != k * l)
    throw InvalidInput("plegma_from_flat: |F| must equal k*l");
  if (formula == FlatFormula::kLegacyRowStep && l != k)
    throw InvalidInput(
        "plegma_from_flat: the row-step ordering s_j(i) = F((i-1)k + j) is a "
        "bijection only when l = k; for l < k it runs out of range and for "
        "l > k it repeats positions, so it cannot encode this shape");
  PlegmaTuple out(l);
  for (int j = 1; j <= l; ++j) {
    std::vector<int> row(k);
    for (int i = 1; i <= k; ++i) {
      int pos = (i - 1) * l + j;
      row[i - 1] = flat.at1(pos);
    }
    out[j - 1] = FinSubset(std::move(row));
  }
  return out;
}

// Inverse direction: union of all entries, with a round-trip verification.
inline FinSubset flat_from_plegma(const PlegmaTuple& tuple) {
  if (!is_plegma(tuple)) throw InvalidInput("flat_from_plegma: tuple is not plegma");
  std::vector<int> all;
  for (const auto& s : tuple)
    for (int x : s) all.push_back(x);
  std::sort(all.begin(), all.end());
  FinSubset flat(std::move(all));
  int k = tuple[0].size(), l = (int)tuple.size();
  if (plegma_from_flat(flat, k, l) != tuple)
    throw std::logic_error("flat_from_plegma: bijection round-trip failed");
  return flat;
}

// All plegma l-tuples in [U]^k, lexicographic in their flats.
template <typename Visit>
bool for_each_plegma(const Universe& u, int k, int l, Visit&& visit) {
  return for_each_subset(u, k * l, [&](const FinSubset& flat) {
    return visit(plegma_from_flat(flat, k, l));
  });
}

inline std::vector<PlegmaTuple> enumerate_plegma(const Universe& u, int k, int l,
                                                 long long max_results = 2000000) {
  long long count = binomial(u.size(), (long long)k * l);
  if (count > max_results)
    throw ScaleRefusal("enumerate_plegma: " + std::to_string(count) +
                       " tuples exceeds cap " + std::to_string(max_results));
  std::vector<PlegmaTuple> out;
  out.reserve((size_t)count);
  for_each_plegma(u, k, l, [&](PlegmaTuple t) {
    out.push_back(std::move(t));
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Heredity: sub-tuples and coordinate projections stay plegma
// ---------------------------------------------------------------------------

// Keep members at tuple_positions (1-based, increasing) and coordinates at
// coord_positions (1-based, increasing) of each member.
inline PlegmaTuple restrict(const PlegmaTuple& tuple,
                            const std::vector<int>& coord_positions,
                            const std::vector<int>& tuple_positions) {
  require_uniform_cardinality(tuple);
  for (size_t i = 1; i < coord_positions.size(); ++i)
    if (coord_positions[i] <= coord_positions[i - 1])
      throw InvalidInput("restrict: coordinate positions must increase");
  for (size_t i = 1; i < tuple_positions.size(); ++i)
    if (tuple_positions[i] <= tuple_positions[i - 1])
      throw InvalidInput("restrict: tuple positions must increase");
  if (coord_positions.empty() || tuple_positions.empty())
    throw InvalidInput("restrict: empty selection");
  PlegmaTuple out;
  out.reserve(tuple_positions.size());
  for (int j : tuple_positions) {
    if (j < 1 || j > (int)tuple.size())
      throw InvalidInput("restrict: tuple position out of range");
    out.push_back(tuple[j - 1].at_positions(coord_positions));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Skipped tuples and plegma paths
// ---------------------------------------------------------------------------

// s is skipped in U when every consecutive gap (s(i), s(i+1)) meets U.
inline bool is_skipped(const FinSubset& s, const Universe& u) {
  if (s.empty()) throw InvalidInput("is_skipped: empty subset");
  if (!u.contains_subset(s))
    throw InvalidInput("is_skipped: subset not contained in universe");
  for (int i = 1; i < s.size(); ++i)
    if (!u.first_between(s.at1(i), s.at1(i + 1))) return false;
  return true;
}

// Interleave s with one universe element per gap: the (2k-1)-subset with
// s(i) at the odd positions, used by the path construction below.
inline FinSubset interleave_with_gaps(const FinSubset& s, const Universe& u) {
  std::vector<int> out;
  out.reserve(2 * s.size() - 1);
  for (int i = 1; i <= s.size(); ++i) {
    out.push_back(s.at1(i));
    if (i < s.size()) {
      auto g = u.first_between(s.at1(i), s.at1(i + 1));
      if (!g) throw InvalidInput("plegma path: endpoint is not skipped in universe");
      out.push_back(*g);
    }
  }
  return FinSubset(std::move(out));
}

// Shortest plegma path between skipped s < t (every element of s below every
// element of t): k+1 vertices s = p_0, ..., p_k = t where p_j takes the first
// k-j odd-shifted entries from the s-side interleaving and the last j from the
// t-side one. Consecutive vertices form plegma pairs; no shorter path exists.
inline std::vector<FinSubset> plegma_path_between(const FinSubset& s,
                                                  const FinSubset& t,
                                                  const Universe& u) {
  if (s.size() != t.size() || s.empty())
    throw InvalidInput("plegma path: endpoints must share cardinality");
  if (s.max() >= t.min())
    throw InvalidInput("plegma path: endpoints must satisfy s < t");
  int k = s.size();
  FinSubset se = interleave_with_gaps(s, u);  // se(2i-1) = s(i)
  FinSubset te = interleave_with_gaps(t, u);  // te(2i-1) = t(i)
  std::vector<FinSubset> path;
  path.reserve(k + 1);
  for (int j = 0; j <= k; ++j) {
    std::vector<int> v;
    v.reserve(k);
    for (int i = 1; i <= k - j; ++i) v.push_back(se.at1(2 * i - 1 + j));
    for (int i = 1; i <= j; ++i) v.push_back(te.at1(2 * i - 1 + k - j));
    path.emplace_back(std::vector<int>(v));
  }
  for (size_t j = 1; j < path.size(); ++j)
    if (!is_plegma_pair(path[j - 1], path[j]))
      throw std::logic_error("plegma path: construction produced a non-plegma step");
  return path;
}

// Successor enumeration in the plegma-pair digraph: v with u0(i) < v(i) < u0(i+1)
// for i < k and v(k) > u0(k), all entries in U.
template <typename Visit>
void for_each_plegma_successor(const FinSubset& u0, const Universe& uni, Visit&& visit) {
  int k = u0.size();
  std::vector<std::vector<int>> choices(k);
  for (int i = 1; i <= k; ++i) {
    int lo = u0.at1(i);
    int hi = (i < k) ? u0.at1(i + 1) : INT32_MAX;
    for (int x : uni.elements())
      if (x > lo && x < hi) choices[i - 1].push_back(x);
    if (choices[i - 1].empty()) return;
  }
  std::vector<int> pick(k, 0);
  while (true) {
    std::vector<int> v(k);
    for (int i = 0; i < k; ++i) v[i] = choices[i][pick[i]];
    visit(FinSubset(std::move(v)));
    int i = k - 1;
    while (i >= 0 && pick[i] + 1 == (int)choices[i].size()) pick[i--] = 0;
    if (i < 0) return;
    ++pick[i];
  }
}

// BFS distance in the directed graph whose edges are plegma pairs.
// Returns nullopt when t is unreachable from s.
inline std::optional<int> plegma_distance(const FinSubset& s, const FinSubset& t,
                                          const Universe& u) {
  if (s.size() != t.size() || s.empty())
    throw InvalidInput("plegma_distance: endpoints must share cardinality");
  if (!u.contains_subset(s) || !u.contains_subset(t))
    throw InvalidInput("plegma_distance: endpoints must lie in the universe");
  if (s == t) return 0;
  std::map<FinSubset, int> dist;
  dist[s] = 0;
  std::deque<FinSubset> queue{s};
  while (!queue.empty()) {
    FinSubset cur = queue.front();
    queue.pop_front();
    int d = dist[cur];
    std::optional<int> found;
    for_each_plegma_successor(cur, u, [&](const FinSubset& nxt) {
      if (dist.count(nxt)) return;
      dist[nxt] = d + 1;
      if (nxt == t) found = d + 1;
      queue.push_back(nxt);
    });
    if (found) return found;
  }
  return std::nullopt;
}

// All plegma paths from s of length <= max_len, reported through visit(path).
// Used to certify that no path shorter than the BFS distance exists.
template <typename Visit>
void for_each_plegma_path_upto(const FinSubset& s, const Universe& u, int max_len,
                               Visit&& visit) {
  std::vector<FinSubset> path{s};
  std::function<void()> dfs = [&]() {
    visit(path);
    if ((int)path.size() - 1 >= max_len) return;
    for_each_plegma_successor(path.back(), u, [&](const FinSubset& nxt) {
      path.push_back(nxt);
      dfs();
      path.pop_back();
    });
  };
  dfs();
}

// ---------------------------------------------------------------------------
// Plegma preserving maps
// ---------------------------------------------------------------------------

using SubsetMap = std::map<FinSubset, FinSubset>;

struct PreservationReport {
  bool preserving = true;
  std::optional<PlegmaTuple> counterexample;  // preimage tuple whose image fails
};

// Check that the image of every plegma tuple of length 2..max_l in [U]^{k1}
// is again plegma. The map must be total on [U]^{k1}.
inline PreservationReport is_plegma_preserving(const SubsetMap& map, const Universe& u,
                                               int k1, int max_l = 2) {
  if (max_l < 2) throw InvalidInput("is_plegma_preserving: max_l must be >= 2");
  PreservationReport rep;
  for (int l = 2; l <= max_l && rep.preserving; ++l) {
    for_each_plegma(u, k1, l, [&](const PlegmaTuple& tuple) {
      PlegmaTuple image;
      image.reserve(tuple.size());
      for (const auto& s : tuple) {
        auto it = map.find(s);
        if (it == map.end())
          throw InvalidInput("is_plegma_preserving: map not total on [U]^k (missing " +
                             s.to_string() + ")");
        image.push_back(it->second);
      }
      bool ok = false;
      try {
        ok = is_plegma(image);
      } catch (const InvalidInput&) {
        ok = false;  // mixed image cardinalities cannot be plegma
      }
      if (!ok) {
        rep.preserving = false;
        rep.counterexample = tuple;
        return false;
      }
      return true;
    });
  }
  return rep;
}

// Search for L inside U, |L| = target_size, such that for every plegma pair
// (s1, s2) in [L]^{k1} neither (f(s1), f(s2)) nor (f(s2), f(s1)) is plegma.
// The property is hereditary, so a lexicographic DFS with incremental pair
// checking finds the lexicographically least witness or proves none exists
// at this size.
inline std::optional<std::vector<int>> find_nonpreserving_witness(
    const SubsetMap& map, const Universe& u, int k1, int target_size) {
  if (target_size < 2 * k1)
    throw InvalidInput("find_nonpreserving_witness: target smaller than one pair");
  auto image_of = [&](const FinSubset& s) -> const FinSubset& {
    auto it = map.find(s);
    if (it == map.end())
      throw InvalidInput("find_nonpreserving_witness: map not total on [U]^k");
    return it->second;
  };
  auto pair_is_bad_for_witness = [&](const PlegmaTuple& pair) {
    const FinSubset& a = image_of(pair[0]);
    const FinSubset& b = image_of(pair[1]);
    auto safe_pair = [](const FinSubset& x, const FinSubset& y) {
      try {
        return is_plegma_pair(x, y);
      } catch (const InvalidInput&) {
        return false;
      }
    };
    return !safe_pair(a, b) && !safe_pair(b, a);
  };

  std::vector<int> all = u.elements();
  std::vector<int> chosen;
  // Every plegma pair whose flat lies inside chosen+cand and uses cand must stay bad.
  std::function<bool(size_t)> ok_with = [&](size_t cand_idx) {
    int cand = all[cand_idx];
    std::vector<int> pool = chosen;
    pool.push_back(cand);
    std::sort(pool.begin(), pool.end());
    if ((int)pool.size() < 2 * k1) return true;
    Universe sub = Universe::explicit_set(pool);
    bool ok = true;
    for_each_plegma(sub, k1, 2, [&](const PlegmaTuple& pair) {
      bool uses_cand = pair[0].contains(cand) || pair[1].contains(cand);
      if (uses_cand && !pair_is_bad_for_witness(pair)) {
        ok = false;
        return false;
      }
      return true;
    });
    return ok;
  };
  std::function<bool(size_t)> dfs = [&](size_t start) {
    if ((int)chosen.size() == target_size) return true;
    for (size_t i = start; i < all.size(); ++i) {
      if ((int)(all.size() - i) < target_size - (int)chosen.size()) break;
      if (!ok_with(i)) continue;
      chosen.push_back(all[i]);
      if (dfs(i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (dfs(0)) return chosen;
  return std::nullopt;
}

}  // namespace plegma
