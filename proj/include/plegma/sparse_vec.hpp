#pragma once

// Finitely supported vectors with exact rational entries, indexed either by
// positive integers (classical sequence spaces) or by FinSubset (spaces whose
// basis is indexed by k-subsets). Zero entries are never stored.

#include <cmath>
#include <map>

#include "fin_subset.hpp"
#include "rational.hpp"

namespace plegma {

template <class Index>
class SparseVec {
 public:
  SparseVec() = default;
  explicit SparseVec(std::vector<std::pair<Index, Rational>> entries) {
    for (auto& [i, v] : entries) add(i, v);
  }

  static SparseVec unit(const Index& i) {
    SparseVec x;
    x.set(i, Rational(1));
    return x;
  }

  void set(const Index& i, const Rational& v) {
    if (v == Rational(0))
      data_.erase(i);
    else
      data_[i] = v;
  }
  void add(const Index& i, const Rational& v) { set(i, at(i) + v); }

  Rational at(const Index& i) const {
    auto it = data_.find(i);
    return it == data_.end() ? Rational(0) : it->second;
  }

  bool empty() const { return data_.empty(); }
  size_t support_size() const { return data_.size(); }
  std::vector<Index> support() const {
    std::vector<Index> s;
    s.reserve(data_.size());
    for (auto& [i, _] : data_) s.push_back(i);
    return s;
  }

  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  SparseVec& operator+=(const SparseVec& o) {
    for (auto& [i, v] : o.data_) add(i, v);
    return *this;
  }
  SparseVec& operator-=(const SparseVec& o) {
    for (auto& [i, v] : o.data_) add(i, -v);
    return *this;
  }
  SparseVec& operator*=(const Rational& c) {
    if (c == Rational(0)) {
      data_.clear();
      return *this;
    }
    for (auto& [i, v] : data_) v = v * c;
    return *this;
  }
  friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
  friend SparseVec operator*(const Rational& c, SparseVec a) { return a *= c; }
  SparseVec operator-() const {
    SparseVec r = *this;
    for (auto& [i, v] : r.data_) v = -v;
    return r;
  }
  bool operator==(const SparseVec& o) const { return data_ == o.data_; }
  bool operator!=(const SparseVec& o) const { return !(*this == o); }

  // Entries whose index satisfies the predicate.
  template <class Pred>
  SparseVec filter(Pred keep) const {
    SparseVec r;
    for (auto& [i, v] : data_)
      if (keep(i)) r.data_.emplace(i, v);
    return r;
  }

  Rational l1() const {
    Rational s(0);
    for (auto& [i, v] : data_) s = s + abs(v);
    return s;
  }
  Rational linf() const {
    Rational m(0);
    for (auto& [i, v] : data_)
      if (abs(v) > m) m = abs(v);
    return m;
  }
  Rational l2_square() const {
    Rational s(0);
    for (auto& [i, v] : data_) s = s + v * v;
    return s;
  }
  double l2() const { return std::sqrt(l2_square().to_double()); }
  Rational sum() const {
    Rational s(0);
    for (auto& [i, v] : data_) s = s + v;
    return s;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (auto& [i, v] : data_) {
      if (!first) out += ", ";
      first = false;
      if constexpr (std::is_same_v<Index, FinSubset>)
        out += i.to_string();
      else
        out += std::to_string(i);
      out += ": " + v.to_string();
    }
    return out + "}";
  }

 private:
  std::map<Index, Rational> data_;
};

using IntVec = SparseVec<int>;
using SubsetVec = SparseVec<FinSubset>;

// Restriction of an integer-indexed vector to the interval [lo, hi].
inline IntVec restrict_interval(const IntVec& x, int lo, int hi) {
  return x.filter([&](int i) { return lo <= i && i <= hi; });
}

inline int min_support(const IntVec& x) {
  if (x.empty()) throw InvalidInput("min_support: zero vector");
  return x.begin()->first;
}
inline int max_support(const IntVec& x) {
  if (x.empty()) throw InvalidInput("max_support: zero vector");
  return std::prev(x.end())->first;
}

// Supports ordered with a gap: every index of x precedes every index of y.
inline bool support_before(const IntVec& x, const IntVec& y) {
  if (x.empty() || y.empty()) return true;
  return max_support(x) < min_support(y);
}

}  // namespace plegma
