#pragma once

// Norm engines: each computes a certified enclosure [lo, hi] of the norm of a
// finitely supported vector. Engines backed by exact rational formulas return
// degenerate enclosures up to the final floating rounding; the recursive
// engines report honest interval widths.

#include <cmath>
#include <memory>

#include "sparse_vec.hpp"

namespace plegma {

struct NormValue {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

inline NormValue exact_value(double v) { return {v, v}; }

template <class Index>
class NormEngine {
 public:
  virtual ~NormEngine() = default;
  virtual std::string name() const = 0;
  virtual NormValue norm(const SparseVec<Index>& x) const = 0;
  double value(const SparseVec<Index>& x) const { return norm(x).mid(); }
};

// ---------------------------------------------------------------------------
// Classical reference norms on integer-indexed vectors
// ---------------------------------------------------------------------------

class L1Engine : public NormEngine<int> {
 public:
  std::string name() const override { return "l1"; }
  NormValue norm(const IntVec& x) const override {
    return exact_value(x.l1().to_double());
  }
};

class L2Engine : public NormEngine<int> {
 public:
  std::string name() const override { return "l2"; }
  NormValue norm(const IntVec& x) const override { return exact_value(x.l2()); }
};

class LinfEngine : public NormEngine<int> {
 public:
  std::string name() const override { return "linf"; }
  NormValue norm(const IntVec& x) const override {
    return exact_value(x.linf().to_double());
  }
};

// Sup norm on c00 viewed inside c0; same values as linf, distinct name so
// reports say which space was meant.
class C0Engine : public NormEngine<int> {
 public:
  std::string name() const override { return "c0"; }
  NormValue norm(const IntVec& x) const override {
    return exact_value(x.linf().to_double());
  }
};

class LpEngine : public NormEngine<int> {
 public:
  explicit LpEngine(double p) : p_(p) {
    if (p < 1.0) throw InvalidInput("LpEngine: p must be >= 1");
  }
  std::string name() const override { return "lp(" + std::to_string(p_) + ")"; }
  NormValue norm(const IntVec& x) const override {
    double s = 0.0;
    for (auto& [i, v] : x) s += std::pow(std::fabs(v.to_double()), p_);
    return exact_value(std::pow(s, 1.0 / p_));
  }

 private:
  double p_;
};

// Norm of the summing basis closure: sup over N of |sum of the first N
// coordinates|. Exact via rational prefix sums.
class SummingEngine : public NormEngine<int> {
 public:
  std::string name() const override { return "summing"; }
  NormValue norm(const IntVec& x) const override {
    return exact_value(prefix_sup(x).to_double());
  }
  static Rational prefix_sup(const IntVec& x) {
    Rational run(0), best(0);
    for (auto& [i, v] : x) {
      run = run + v;
      if (abs(run) > best) best = abs(run);
    }
    return best;
  }
};

}  // namespace plegma
