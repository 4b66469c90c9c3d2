#pragma once

// Plegmatic and Schreier plegmatic families.
//
// A finite set P of (k+1)-subsets is plegmatic when there are successive
// blocks F_1 < F_2 < ... < F_{k+1} of equal size with P inside F_1 x ... x
// F_{k+1} (member i-th entries inside F_i). Schreier plegmatic additionally
// requires |F_1| <= min F_1. Feasibility is decided exactly: the only freedom
// is how each coordinate column gets padded up to the common block size, and
// padding a block never has to exceed the largest column cardinality m —
// deleting surplus padding from a larger witness keeps containment, block
// order, and |F_1| <= min F_1, so feasibility at any size implies it at m.

#include <functional>
#include <optional>
#include <set>

#include "core.hpp"

namespace plegma {

// Canonical family: sorted, duplicates collapsed.
using Family = std::vector<FinSubset>;

inline Family canonical_family(std::vector<FinSubset> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw InvalidInput("family: empty");
  for (const auto& s : members)
    if (s.size() != members[0].size())
      throw InvalidInput("family: mixed member cardinalities");
  return members;
}

// Column i = { s(i) : s in P }, as a set.
inline std::vector<std::set<int>> family_columns(const Family& members) {
  int r = members[0].size();
  std::vector<std::set<int>> cols(r);
  for (const auto& s : members)
    for (int i = 1; i <= r; ++i) cols[i - 1].insert(s.at1(i));
  return cols;
}

enum class FeasibilityMode { kExact, kGreedy };

struct BlockWitness {
  bool feasible = false;
  std::vector<FinSubset> blocks;  // F_1 < ... < F_r, equal sizes, when feasible
};

// Independent validation of a witness: used by tests and by the exact search.
inline bool blocks_cover_family(const Family& members,
                                const std::vector<FinSubset>& blocks,
                                bool schreier) {
  if (blocks.empty()) return false;
  int r = members[0].size();
  if ((int)blocks.size() != r) return false;
  int m = blocks[0].size();
  for (const auto& b : blocks)
    if (b.size() != m) return false;
  for (size_t i = 1; i < blocks.size(); ++i)
    if (!FinSubset::before(blocks[i - 1], blocks[i])) return false;
  for (const auto& s : members)
    for (int i = 1; i <= r; ++i)
      if (!blocks[i - 1].contains(s.at1(i))) return false;
  if (schreier && m > blocks[0].min()) return false;
  return true;
}

namespace detail {

// Greedy right-to-left block construction at the minimal common size m:
// pad each block with the largest integers available below the next block's
// minimum. This maximizes every min F_i in turn, which is the only quantity
// the remaining blocks (and the Schreier condition) depend on, so greedy
// success/failure equals feasibility.
inline BlockWitness greedy_blocks(const Family& members, bool schreier) {
  auto cols = family_columns(members);
  int r = (int)cols.size();
  for (int i = 1; i < r; ++i)
    if (*cols[i - 1].rbegin() >= *cols[i].begin()) return {};  // columns must separate
  int m = 0;
  for (auto& c : cols) m = std::max<int>(m, (int)c.size());

  std::vector<FinSubset> blocks(r);
  long long upper = (long long)*cols[r - 1].rbegin() + m + 1;  // exclusive bound
  for (int i = r - 1; i >= 0; --i) {
    std::vector<int> block(cols[i].begin(), cols[i].end());
    int need = m - (int)block.size();
    for (long long x = upper - 1; need > 0 && x >= 1; --x) {
      if (!cols[i].count((int)x)) {
        block.push_back((int)x);
        --need;
      }
    }
    if (need > 0) return {};  // not enough room below the next block
    std::sort(block.begin(), block.end());
    if (block.back() >= upper) return {};
    blocks[i] = FinSubset(std::move(block));
    upper = blocks[i].min();
  }
  if (schreier && m > blocks[0].min()) return {};
  BlockWitness w;
  w.feasible = true;
  w.blocks = std::move(blocks);
  return w;
}

// Bounded exhaustive search over padding placements, left to right. Padding
// for block i is drawn from the integers above the previous block's maximum
// and below the next column's minimum (the last block may also pad upward).
inline BlockWitness exact_blocks(const Family& members, bool schreier, int max_pad) {
  auto cols = family_columns(members);
  int r = (int)cols.size();
  for (int i = 1; i < r; ++i)
    if (*cols[i - 1].rbegin() >= *cols[i].begin()) return {};
  int m = 0;
  for (auto& c : cols) m = std::max<int>(m, (int)c.size());
  for (auto& c : cols)
    if (m - (int)c.size() > max_pad) return {};  // outside the search bound

  std::vector<FinSubset> blocks(r);
  BlockWitness found;
  std::function<bool(int, int)> place = [&](int i, int prev_max) {
    if (i == r) {
      found.feasible = true;
      found.blocks = blocks;
      return true;
    }
    const auto& col = cols[i];
    if (*col.begin() <= prev_max) return false;
    int need = m - (int)col.size();
    int hi = (i + 1 < r) ? *cols[i + 1].begin() : *col.rbegin() + need + 1;
    std::vector<int> pool;
    for (int x = prev_max + 1; x < hi; ++x)
      if (!col.count(x)) pool.push_back(x);
    if ((int)pool.size() < need) return false;
    std::vector<int> pick(need);
    std::function<bool(int, int)> combos = [&](int from, int got) {
      if (got == need) {
        std::vector<int> block(col.begin(), col.end());
        block.insert(block.end(), pick.begin(), pick.begin() + need);
        std::sort(block.begin(), block.end());
        FinSubset candidate(std::move(block));
        if (schreier && i == 0 && m > candidate.min()) return false;
        blocks[i] = candidate;
        return place(i + 1, candidate.max());
      }
      for (int p = from; p <= (int)pool.size() - (need - got); ++p) {
        pick[got] = pool[p];
        if (combos(p + 1, got + 1)) return true;
      }
      return false;
    };
    if (need == 0) {
      std::vector<int> block(col.begin(), col.end());
      FinSubset candidate(std::move(block));
      if (schreier && i == 0 && m > candidate.min()) return false;
      blocks[i] = candidate;
      return place(i + 1, candidate.max());
    }
    return combos(0, 0);
  };
  place(0, 0);
  return found;
}

}  // namespace detail

// Decide plegmatic / Schreier plegmatic feasibility and produce block
// witnesses. max_pad bounds padding per block in the exact search; the
// default is always enough to reach the minimal common size.
inline BlockWitness plegmatic_blocks(const Family& members, bool schreier,
                                     FeasibilityMode mode = FeasibilityMode::kExact,
                                     int max_pad = -1) {
  Family fam = canonical_family(members);
  if (max_pad < 0) {
    auto cols = family_columns(fam);
    int m = 0, lo = INT32_MAX;
    for (auto& c : cols) {
      m = std::max<int>(m, (int)c.size());
      lo = std::min<int>(lo, (int)c.size());
    }
    max_pad = m - lo;
  }
  BlockWitness w = (mode == FeasibilityMode::kExact)
                       ? detail::exact_blocks(fam, schreier, max_pad)
                       : detail::greedy_blocks(fam, schreier);
  if (w.feasible && !blocks_cover_family(fam, w.blocks, schreier))
    throw std::logic_error("plegmatic_blocks: witness failed validation");
  return w;
}

inline bool is_plegmatic(const Family& members,
                         FeasibilityMode mode = FeasibilityMode::kExact) {
  return plegmatic_blocks(members, /*schreier=*/false, mode).feasible;
}

inline bool is_schreier_plegmatic(const Family& members,
                                  FeasibilityMode mode = FeasibilityMode::kExact) {
  return plegmatic_blocks(members, /*schreier=*/true, mode).feasible;
}

// ---------------------------------------------------------------------------
// Weakly plegmatic paths
// ---------------------------------------------------------------------------

// (G_0, ..., G_j) is a weakly plegmatic path when, for every consecutive pair
// and every s2 in the later set, some s1 in the earlier set makes {s1, s2}
// plegmatic (no Schreier condition on the covering blocks).
inline bool is_weakly_plegmatic_path(const std::vector<std::vector<FinSubset>>& path) {
  if (path.empty()) throw InvalidInput("weakly plegmatic path: empty path");
  int card = -1;
  for (const auto& g : path) {
    if (g.empty()) throw InvalidInput("weakly plegmatic path: empty set in path");
    for (const auto& s : g) {
      if (card < 0) card = s.size();
      if (s.size() != card)
        throw InvalidInput("weakly plegmatic path: mixed member cardinalities");
    }
  }
  for (size_t i = 1; i < path.size(); ++i) {
    for (const auto& s2 : path[i]) {
      bool covered = false;
      for (const auto& s1 : path[i - 1]) {
        if (is_plegmatic(canonical_family({s1, s2}))) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
  }
  return true;
}

}  // namespace plegma
