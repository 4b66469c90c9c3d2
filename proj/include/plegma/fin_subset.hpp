#pragma once

// Finite subsets of the positive integers and the universes they live in.
//
// A FinSubset is kept as a strictly increasing vector<int>; the i-th element
// (1-based, matching the usual s(1) < ... < s(k) notation) is s.at1(i).
// A Universe is either an explicit finite set or the initial segment {1..n};
// every search in the library takes its universe explicitly so that thinned
// sub-universes ("the evens", a Ramsey-extracted L, ...) are first-class.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plegma {

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Refusal distinct from invalid input: the request is well-formed but exceeds
// the documented exact-computation scale for the op.
struct ScaleRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FinSubset {
 public:
  FinSubset() = default;
  FinSubset(std::initializer_list<int> xs) : elems_(xs) { validate_(); }
  explicit FinSubset(std::vector<int> xs) : elems_(std::move(xs)) { validate_(); }

  int size() const { return (int)elems_.size(); }
  bool empty() const { return elems_.empty(); }

  // 1-based access: s.at1(1) = min, s.at1(size()) = max.
  int at1(int i) const {
    if (i < 1 || i > size()) throw InvalidInput("FinSubset: index out of range");
    return elems_[i - 1];
  }
  int min() const { return at1(1); }
  int max() const { return at1(size()); }

  const std::vector<int>& elems() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool contains(int x) const {
    return std::binary_search(elems_.begin(), elems_.end(), x);
  }

  // Positional restriction: keep the entries at the given 1-based positions.
  FinSubset at_positions(const std::vector<int>& positions) const {
    std::vector<int> out;
    out.reserve(positions.size());
    for (int p : positions) out.push_back(at1(p));
    return FinSubset(std::move(out));
  }

  // Initial segment s|j = first j entries; s|0 is the empty set.
  FinSubset prefix(int j) const {
    if (j < 0 || j > size()) throw InvalidInput("FinSubset: bad prefix length");
    return FinSubset(std::vector<int>(elems_.begin(), elems_.begin() + j));
  }
  // s minus its maximum (the parent node in the tree [M]^{<=k}).
  FinSubset drop_max() const {
    if (empty()) throw InvalidInput("FinSubset: drop_max of empty set");
    return prefix(size() - 1);
  }

  FinSubset with(int x) const {
    std::vector<int> out = elems_;
    out.insert(std::upper_bound(out.begin(), out.end(), x), x);
    return FinSubset(std::move(out));
  }

  friend bool operator==(const FinSubset& a, const FinSubset& b) {
    return a.elems_ == b.elems_;
  }
  friend bool operator!=(const FinSubset& a, const FinSubset& b) { return !(a == b); }
  friend bool operator<(const FinSubset& a, const FinSubset& b) {
    return a.elems_ < b.elems_;  // lexicographic; total order used in maps
  }

  // Block order: every element of a below every element of b.
  static bool before(const FinSubset& a, const FinSubset& b) {
    if (a.empty() || b.empty()) return true;
    return a.max() < b.min();
  }

  std::string to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < elems_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(elems_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> elems_;

  void validate_() {
    for (size_t i = 0; i < elems_.size(); ++i) {
      if (elems_[i] <= 0)
        throw InvalidInput("FinSubset: elements must be positive integers");
      if (i > 0 && elems_[i] <= elems_[i - 1])
        throw InvalidInput("FinSubset: elements must be strictly increasing");
    }
  }
};

// A tuple (s_1, ..., s_l) of k-subsets, candidate plegma family.
using PlegmaTuple = std::vector<FinSubset>;

class Universe {
 public:
  // Initial segment {1, ..., n}.
  static Universe initial_segment(int n) {
    if (n < 0) throw InvalidInput("Universe: negative size");
    Universe u;
    u.horizon_ = n;
    return u;
  }
  // Explicit finite set, e.g. the evens up to some horizon.
  static Universe explicit_set(std::vector<int> elems) {
    Universe u;
    u.horizon_ = -1;
    FinSubset check(elems);  // validates positivity + strict increase
    u.elems_ = check.elems();
    return u;
  }

  int size() const { return horizon_ >= 0 ? horizon_ : (int)elems_.size(); }
  bool is_initial_segment() const { return horizon_ >= 0; }

  // M(i), 1-based.
  int at1(int i) const {
    if (i < 1 || i > size()) throw InvalidInput("Universe: index out of range");
    return horizon_ >= 0 ? i : elems_[i - 1];
  }

  bool contains(int x) const {
    if (horizon_ >= 0) return x >= 1 && x <= horizon_;
    return std::binary_search(elems_.begin(), elems_.end(), x);
  }

  // 1-based position of x, if present.
  std::optional<int> index_of(int x) const {
    if (horizon_ >= 0) return contains(x) ? std::optional<int>(x) : std::nullopt;
    auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
    if (it == elems_.end() || *it != x) return std::nullopt;
    return (int)(it - elems_.begin()) + 1;
  }

  std::vector<int> elements() const {
    if (horizon_ < 0) return elems_;
    std::vector<int> out(horizon_);
    for (int i = 0; i < horizon_; ++i) out[i] = i + 1;
    return out;
  }

  // Smallest universe element strictly between lo and hi, if any.
  std::optional<int> first_between(int lo, int hi) const {
    if (horizon_ >= 0) {
      int c = lo + 1;
      return (c < hi && c <= horizon_) ? std::optional<int>(c) : std::nullopt;
    }
    auto it = std::upper_bound(elems_.begin(), elems_.end(), lo);
    if (it == elems_.end() || *it >= hi) return std::nullopt;
    return *it;
  }

  bool contains_subset(const FinSubset& s) const {
    for (int x : s)
      if (!contains(x)) return false;
    return true;
  }

 private:
  int horizon_ = 0;            // >= 0: initial segment {1..horizon_}
  std::vector<int> elems_;     // used when horizon_ < 0
};

// Enumerate all k-subsets of the universe in lexicographic order, invoking
// visit(subset); visit returns false to stop early. Returns true if the
// enumeration ran to completion.
template <typename Visit>
bool for_each_subset(const Universe& u, int k, Visit&& visit) {
  int n = u.size();
  if (k < 0) throw InvalidInput("for_each_subset: negative k");
  if (k > n) return true;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i + 1;
  std::vector<int> buf(k);
  while (true) {
    for (int i = 0; i < k; ++i) buf[i] = u.at1(idx[i]);
    if (!visit(FinSubset(std::vector<int>(buf)))) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - (k - 1 - i)) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > INT64_MAX) throw std::overflow_error("binomial: 64-bit overflow");
  }
  return (long long)r;
}

}  // namespace plegma
