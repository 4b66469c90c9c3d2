#pragma once

// Two-parameter recursive norm on finitely supported integer-indexed vectors:
//
//   |x| = max( sup|x_i| , ( sum_j ( (1/m_j) * P_{n_j}(x) )^2 )^(1/2) )
//
// where P_p(x) is the supremum of |E_1 x| + ... + |E_q x| over q <= p
// successive pieces, and the piece values use the same norm recursively.
//
// Well-foundedness: the one-piece split never decides P, because splitting
// any piece in two cannot decrease the sum (triangle inequality for the
// recursive values), so P may be restricted to proper subintervals and the
// whole table closes bottom-up by interval length. Pieces may be taken as
// intervals of the support: the norm is suppression-unconditional, so
// spreading a piece out never helps.
//
// Only finitely many levels are given explicitly. Levels beyond the table
// satisfy P_{n_j}(x) <= l1(x), and the validated budget sum 1/m_j <= 1/9
// bounds their total weight, giving a certified enclosure [lo, hi]:
// lo ignores the tail, hi charges l1(x)^2 * slack^2 inside the square sum.

#include <cmath>

#include "engines.hpp"

namespace plegma {

struct TsirelsonConfig {
  std::vector<long long> m;  // level weights, strictly increasing
  std::vector<long long> n;  // level piece budgets, strictly increasing

  int levels() const { return (int)m.size(); }

  Rational budget() const {
    Rational s(0);
    for (long long mj : m) s = s + Rational(1, mj);
    return s;
  }
  // Certified bound on the weight of all levels beyond the table.
  Rational tail_slack() const { return Rational(1, 9) - budget(); }

  // Throws InvalidInput when the parameters violate the admissibility rules.
  void validate() const {
    if (m.empty() || m.size() != n.size())
      throw InvalidInput("config: need equally many m and n levels, at least one");
    for (size_t j = 0; j < m.size(); ++j) {
      if (m[j] < 2) throw InvalidInput("config: m values must be at least 2");
      if (n[j] < 2) throw InvalidInput("config: n values must be at least 2");
      if (j > 0 && m[j] <= m[j - 1])
        throw InvalidInput("config: m must be strictly increasing");
      if (j > 0 && n[j] <= n[j - 1])
        throw InvalidInput("config: n must be strictly increasing");
      if (j > 0 && n[j] <= m[j - 1] * n[j - 1])
        throw InvalidInput("config: need n[j+1] > m[j]*n[j]");
    }
    if (budget() > Rational(1, 9))
      throw InvalidInput("config: sum of 1/m_j exceeds 1/9");
  }

  // Named parameter sets used by the command line tool and the tests.
  //   standard    decade weights, the default working scale
  //   steep       century weights, much lighter tail
  //   bad-budget  deliberately inadmissible: weight sum exceeds 1/9
  static TsirelsonConfig preset(const std::string& name) {
    if (name == "standard") return {{10, 100, 1000}, {100, 10000, 10000000}};
    if (name == "steep") return {{100, 10000, 1000000}, {100, 20000, 300000000}};
    if (name == "bad-budget") return {{9, 90, 900}, {100, 10000, 10000000}};
    throw InvalidInput("unknown config preset: " + name);
  }
};

struct TsirelsonResult {
  double lo = 0.0;
  double hi = 0.0;
  NormValue as_value() const { return {lo, hi}; }
};

namespace detail {

// Dense per-interval evaluation over the support positions. One pass per
// bound side; `use_tail` adds the l1*slack charge that turns the closed part
// into an upper bound.
class TsirelsonTable {
 public:
  TsirelsonTable(const IntVec& x, const TsirelsonConfig& cfg, bool use_tail)
      : cfg_(cfg), use_tail_(use_tail) {
    for (auto& [i, v] : x) {
      pos_.push_back(i);
      av_.push_back(std::fabs(v.to_double()));
    }
    d_ = (int)pos_.size();
    slack_ = use_tail ? cfg.tail_slack().to_double() : 0.0;
    if (slack_ < 0.0) slack_ = 0.0;
    build();
  }

  int size() const { return d_; }
  double root() const { return d_ ? v_[idx(0, d_ - 1)] : 0.0; }
  double value(int a, int b) const { return v_[idx(a, b)]; }
  const std::vector<int>& positions() const { return pos_; }

  // Estimated inner-loop operations for the partition dynamic programs; used
  // by the caller to refuse oversized inputs before committing.
  static double estimated_ops(int d, const TsirelsonConfig& cfg) {
    long long q = 0;
    for (long long nj : cfg.n)
      if (nj < d) q = std::max(q, nj);
    return (double)q * d * d * d / 6.0;
  }

  // Best split of [a, b] into exactly q successive pieces for a given level
  // budget; used for certificate reconstruction. Returns piece boundaries.
  std::vector<std::pair<int, int>> best_partition(int a, int b, long long p) const {
    int len = b - a + 1;
    int qmax = (int)std::min<long long>(p, len);
    // f[q][i] over [a..i]; parent[q][i] = split point s.
    std::vector<std::vector<double>> f(qmax + 1,
                                       std::vector<double>(d_, -1.0));
    std::vector<std::vector<int>> par(qmax + 1, std::vector<int>(d_, -1));
    for (int i = a; i <= b; ++i) f[1][i] = v_[idx(a, i)];
    for (int q = 2; q <= qmax; ++q)
      for (int i = a + q - 1; i <= b; ++i)
        for (int s = a + q - 2; s < i; ++s) {
          if (f[q - 1][s] < 0.0) continue;
          double cand = f[q - 1][s] + v_[idx(s + 1, i)];
          if (cand > f[q][i]) {
            f[q][i] = cand;
            par[q][i] = s;
          }
        }
    int best_q = 1;
    for (int q = 2; q <= qmax; ++q)
      if (f[q][b] > f[best_q][b]) best_q = q;
    std::vector<std::pair<int, int>> pieces;
    int i = b;
    for (int q = best_q; q >= 1; --q) {
      int s = (q == 1) ? a - 1 : par[q][i];
      pieces.push_back({s + 1, i});
      i = s;
    }
    std::reverse(pieces.begin(), pieces.end());
    return pieces;
  }

 private:
  size_t idx(int a, int b) const { return (size_t)a * d_ + b; }

  void build() {
    if (d_ == 0) return;
    v_.assign((size_t)d_ * d_, 0.0);
    l1_.assign((size_t)d_ * d_, 0.0);
    linf_.assign((size_t)d_ * d_, 0.0);
    for (int a = 0; a < d_; ++a) {
      double s = 0.0, m = 0.0;
      for (int b = a; b < d_; ++b) {
        s += av_[b];
        m = std::max(m, av_[b]);
        l1_[idx(a, b)] = s;
        linf_[idx(a, b)] = m;
      }
    }
    int J = cfg_.levels();
    std::vector<double> inv_m(J);
    for (int j = 0; j < J; ++j) inv_m[j] = 1.0 / (double)cfg_.m[j];

    long long qrow_all = 0;
    for (int j = 0; j < J; ++j)
      if (cfg_.n[j] < d_) qrow_all = std::max(qrow_all, cfg_.n[j]);
    std::vector<std::vector<double>> f;
    if (qrow_all > 0)
      f.assign((size_t)qrow_all + 1, std::vector<double>(d_, -1.0));

    for (int a = d_ - 1; a >= 0; --a) {
      int max_len = d_ - a;
      long long qrow = 0;
      for (int j = 0; j < J; ++j)
        if (cfg_.n[j] < max_len) qrow = std::max(qrow, cfg_.n[j]);
      if (qrow > 0)
        for (long long q = 1; q <= qrow; ++q) std::fill(f[q].begin(), f[q].end(), -1.0);
      for (int b = a; b < d_; ++b) {
        int len = b - a + 1;
        if (qrow > 0) {
          long long qcap = std::min<long long>(qrow, len);
          for (long long q = 2; q <= qcap; ++q) {
            double best = -1.0;
            for (int s = a + (int)q - 2; s < b; ++s) {
              if (f[q - 1][s] < 0.0) continue;
              double cand = f[q - 1][s] + v_[idx(s + 1, b)];
              if (cand > best) best = cand;
            }
            f[q][b] = best;
          }
        }
        double sq = 0.0;
        for (int j = 0; j < J; ++j) {
          double pj;
          if (cfg_.n[j] >= len) {
            pj = l1_[idx(a, b)];
          } else {
            pj = 0.0;
            long long qcap = std::min<long long>(cfg_.n[j], len);
            for (long long q = 2; q <= qcap; ++q) pj = std::max(pj, f[q][b]);
          }
          sq += (pj * inv_m[j]) * (pj * inv_m[j]);
        }
        double t = l1_[idx(a, b)] * slack_;
        sq += t * t;
        double val = std::max(linf_[idx(a, b)], std::sqrt(sq));
        v_[idx(a, b)] = val;
        if (qrow > 0) f[1][b] = val;
      }
    }
  }

  TsirelsonConfig cfg_;
  bool use_tail_;
  double slack_ = 0.0;
  std::vector<int> pos_;
  std::vector<double> av_;
  int d_ = 0;
  std::vector<double> v_, l1_, linf_;
};

}  // namespace detail

inline TsirelsonResult tsirelson_norm(const IntVec& x, const TsirelsonConfig& cfg,
                                      int support_cap = 600,
                                      double ops_budget = 4e9) {
  cfg.validate();
  int d = (int)x.support_size();
  if (d > support_cap)
    throw ScaleRefusal("tsirelson_norm: support size " + std::to_string(d) +
                       " exceeds cap " + std::to_string(support_cap));
  double ops = detail::TsirelsonTable::estimated_ops(d, cfg);
  if (2.0 * ops > ops_budget)
    throw ScaleRefusal("tsirelson_norm: estimated work " + std::to_string(2.0 * ops) +
                       " exceeds budget " + std::to_string(ops_budget));
  TsirelsonResult res;
  if (d == 0) return res;
  detail::TsirelsonTable lo(x, cfg, false);
  detail::TsirelsonTable hi(x, cfg, true);
  res.lo = lo.root();
  res.hi = hi.root();
  return res;
}

// Contribution of a single weight level to the layered bound: the best split
// of the support into at most n[level-1] successive pieces, each piece scored
// by the upper-bound interval table, scaled by 1/m[level-1]. Useful for
// checking how flat a vector (for instance a long block average) sits under
// one level of the weighting. `level` is 1-based.
inline double tsirelson_level_share(const IntVec& x, const TsirelsonConfig& cfg,
                                    int level, int support_cap = 600,
                                    double ops_budget = 4e9) {
  cfg.validate();
  if (level < 1 || level > cfg.levels())
    throw InvalidInput("tsirelson_level_share: level " + std::to_string(level) +
                       " outside 1.." + std::to_string(cfg.levels()));
  int d = (int)x.support_size();
  if (d == 0) return 0.0;
  if (d > support_cap)
    throw ScaleRefusal("tsirelson_level_share: support size " + std::to_string(d) +
                       " exceeds cap " + std::to_string(support_cap));
  double ops = detail::TsirelsonTable::estimated_ops(d, cfg);
  if (2.0 * ops > ops_budget)
    throw ScaleRefusal("tsirelson_level_share: estimated work " +
                       std::to_string(2.0 * ops) + " exceeds budget " +
                       std::to_string(ops_budget));
  detail::TsirelsonTable table(x, cfg, true);
  auto pieces = table.best_partition(0, d - 1, cfg.n[(size_t)level - 1]);
  double total = 0.0;
  for (auto& [a, b] : pieces) total += table.value(a, b);
  return total / (double)cfg.m[(size_t)level - 1];
}

class TsirelsonEngine : public NormEngine<int> {
 public:
  explicit TsirelsonEngine(TsirelsonConfig cfg, int support_cap = 600,
                           double ops_budget = 4e9)
      : cfg_(std::move(cfg)), cap_(support_cap), budget_(ops_budget) {
    cfg_.validate();
  }
  std::string name() const override { return "tsirelson"; }
  const TsirelsonConfig& config() const { return cfg_; }
  NormValue norm(const IntVec& x) const override {
    auto r = tsirelson_norm(x, cfg_, cap_, budget_);
    return {r.lo, r.hi};
  }

 private:
  TsirelsonConfig cfg_;
  int cap_;
  double budget_;
};

// ---------------------------------------------------------------------------
// Lower-bound certificates
// ---------------------------------------------------------------------------

// A split tree justifying the lower bound: every node claims a value for an
// interval of support positions, realized either by one coordinate (sup
// branch) or by per-level partitions whose pieces are smaller nodes. A piece
// with no node of its own falls back to the sup of |x| on it, which is always
// a valid lower bound, so verification is sound even on sparse trees.
struct TsirelsonCertNode {
  int a = 0, b = 0;   // support position range, 0-based inclusive
  double value = 0.0;
  struct LevelSplit {
    int level;  // 0-based index into config.m / config.n
    std::vector<std::pair<int, int>> pieces;
  };
  std::vector<LevelSplit> levels;
};

struct TsirelsonCertificate {
  TsirelsonConfig config;
  std::vector<int> positions;  // support positions of the certified vector
  std::vector<TsirelsonCertNode> nodes;  // nodes[0] covers the whole support
  double lo = 0.0;
};

inline TsirelsonCertificate tsirelson_certificate(const IntVec& x,
                                                  const TsirelsonConfig& cfg,
                                                  int support_cap = 150) {
  cfg.validate();
  int d = (int)x.support_size();
  if (d > support_cap)
    throw ScaleRefusal("tsirelson_certificate: support size " + std::to_string(d) +
                       " exceeds cap " + std::to_string(support_cap));
  TsirelsonCertificate cert;
  cert.config = cfg;
  if (d == 0) return cert;
  detail::TsirelsonTable tab(x, cfg, false);
  cert.positions = tab.positions();
  cert.lo = tab.root();

  std::map<std::pair<int, int>, int> seen;
  std::function<int(int, int)> emit = [&](int a, int b) -> int {
    auto key = std::make_pair(a, b);
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    int id = (int)cert.nodes.size();
    seen[key] = id;
    cert.nodes.push_back({});
    TsirelsonCertNode node;
    node.a = a;
    node.b = b;
    node.value = tab.value(a, b);
    int len = b - a + 1;
    for (int j = 0; j < cfg.levels(); ++j) {
      TsirelsonCertNode::LevelSplit ls;
      ls.level = j;
      if (cfg.n[j] >= len) {
        for (int i = a; i <= b; ++i) ls.pieces.push_back({i, i});
      } else {
        ls.pieces = tab.best_partition(a, b, cfg.n[j]);
        for (auto& [pa, pb] : ls.pieces)
          if (pb > pa) emit(pa, pb);
      }
      node.levels.push_back(std::move(ls));
    }
    cert.nodes[id] = std::move(node);
    return id;
  };
  emit(0, d - 1);
  return cert;
}

// Recomputes every node's value from its children (missing children fall back
// to sup|x| on their range) and checks the claims from below, then checks the
// root claim against the recomputed root. Every step is valid lower-bound
// reasoning, so acceptance implies lo <= |x|.
inline bool verify_tsirelson_certificate(const TsirelsonCertificate& cert,
                                         const IntVec& x, std::string* why = nullptr,
                                         double tol = 1e-9) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  try {
    cert.config.validate();
  } catch (const InvalidInput& e) {
    return fail(e.what());
  }
  std::vector<double> av;
  for (auto& [i, v] : x) av.push_back(std::fabs(v.to_double()));
  int d = (int)av.size();
  if (cert.positions.size() != (size_t)d) return fail("position list mismatch");
  {
    int k = 0;
    for (auto& [i, v] : x)
      if (cert.positions[k++] != i) return fail("position list mismatch");
  }
  if (cert.nodes.empty()) return fail("no nodes");
  std::map<std::pair<int, int>, const TsirelsonCertNode*> by_range;
  for (const auto& nd : cert.nodes) {
    if (nd.a < 0 || nd.b >= d || nd.a > nd.b) return fail("node range out of bounds");
    by_range[{nd.a, nd.b}] = &nd;
  }
  auto sup_on = [&](int a, int b) {
    double m = 0.0;
    for (int i = a; i <= b; ++i) m = std::max(m, av[i]);
    return m;
  };
  std::map<std::pair<int, int>, double> memo;
  std::function<double(int, int)> lower = [&](int a, int b) -> double {
    auto key = std::make_pair(a, b);
    auto mit = memo.find(key);
    if (mit != memo.end()) return mit->second;
    memo[key] = sup_on(a, b);  // guards cyclic references to something valid
    auto it = by_range.find(key);
    if (it == by_range.end()) return memo[key];
    const TsirelsonCertNode& nd = *it->second;
    double sq = 0.0;
    for (const auto& ls : nd.levels) {
      if (ls.level < 0 || ls.level >= cert.config.levels()) return 0.0;
      if ((long long)ls.pieces.size() > cert.config.n[ls.level]) return 0.0;
      int expect = nd.a;
      double sum = 0.0;
      for (auto& [pa, pb] : ls.pieces) {
        if (pa != expect || pb < pa || pb > nd.b) return 0.0;
        expect = pb + 1;
        sum += (pa == pb && by_range.find({pa, pb}) == by_range.end())
                   ? av[pa]
                   : lower(pa, pb);
      }
      if (expect != nd.b + 1) return 0.0;
      double t = sum / (double)cert.config.m[ls.level];
      sq += t * t;
    }
    double val = std::max(sup_on(a, b), std::sqrt(sq));
    memo[key] = val;
    return val;
  };
  for (const auto& nd : cert.nodes) {
    double got = lower(nd.a, nd.b);
    if (nd.value > got + tol)
      return fail("node (" + std::to_string(nd.a) + "," + std::to_string(nd.b) +
                  ") claims " + std::to_string(nd.value) + " but verifies to " +
                  std::to_string(got));
  }
  const auto& root = cert.nodes.front();
  if (root.a != 0 || root.b != d - 1) return fail("root does not cover the support");
  if (cert.lo > lower(0, d - 1) + tol) return fail("root claim too large");
  return true;
}

// Literal fixed-point iteration of the defining equation, trivial one-piece
// split included. Used by tests to confirm that the bottom-up table is the
// least fixed point; exponential in nothing but patience, so small supports
// only.
inline double tsirelson_fixed_point_iterate(const IntVec& x,
                                            const TsirelsonConfig& cfg,
                                            int max_iters = 200,
                                            double eps = 1e-12) {
  cfg.validate();
  int d = (int)x.support_size();
  if (d == 0) return 0.0;
  if (d > 12)
    throw ScaleRefusal("tsirelson_fixed_point_iterate: supports above 12 refused");
  std::vector<double> av;
  for (auto& [i, v] : x) av.push_back(std::fabs(v.to_double()));
  auto idx = [&](int a, int b) { return (size_t)a * d + b; };
  std::vector<double> linf((size_t)d * d, 0.0), w((size_t)d * d, 0.0);
  for (int a = 0; a < d; ++a) {
    double m = 0.0;
    for (int b = a; b < d; ++b) {
      m = std::max(m, av[b]);
      linf[idx(a, b)] = m;
    }
  }
  w = linf;
  int J = cfg.levels();
  for (int it = 0; it < max_iters; ++it) {
    std::vector<double> next((size_t)d * d, 0.0);
    double delta = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        int len = b - a + 1;
        double sq = 0.0;
        for (int j = 0; j < J; ++j) {
          long long p = std::min<long long>(cfg.n[j], len);
          // Best sum over at most p successive pieces, previous iterate
          // values, one-piece split allowed.
          std::vector<std::vector<double>> f((size_t)p + 1,
                                             std::vector<double>(d, -1.0));
          for (int i = a; i <= b; ++i) f[1][i] = w[idx(a, i)];
          double best = f[1][b];
          for (long long q = 2; q <= p; ++q) {
            for (int i = a; i <= b; ++i) {
              for (int s = a; s < i; ++s) {
                if (f[q - 1][s] < 0.0) continue;
                double cand = f[q - 1][s] + w[idx(s + 1, i)];
                if (cand > f[q][i]) f[q][i] = cand;
              }
            }
            best = std::max(best, f[q][b]);
          }
          double t = best / (double)cfg.m[j];
          sq += t * t;
        }
        next[idx(a, b)] = std::max(linf[idx(a, b)], std::sqrt(sq));
        delta = std::max(delta, std::fabs(next[idx(a, b)] - w[idx(a, b)]));
      }
    w.swap(next);
    if (delta < eps) break;
  }
  return w[idx(0, d - 1)];
}

}  // namespace plegma
