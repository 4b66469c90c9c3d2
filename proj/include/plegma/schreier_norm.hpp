#pragma once

// Norm of the Schreier-plegmatic space on basis vectors indexed by k-subsets.
//
// A norming functional picks pairwise disjoint admissible families P_1..P_d
// of support subsets (admissible = Schreier-plegmatic as a family), signs per
// basis element, and scalars with sum of squares at most 1. The norm is the
// max over partitions of supp(x) into admissible families of
// sqrt(sum_i mass(P_i)^2) with mass(P_i) = sum of |x_s| over s in P_i:
// per-element signs make masses absolute, and filling unused support with
// singleton families (always admissible) never decreases the value.
//
// Exact evaluation by dynamic programming over support subsets: 3^n partition
// steps on n support points, masses and squares in exact rationals.

#include "family.hpp"
#include "engines.hpp"

namespace plegma {

struct SchreierNormResult {
  Rational square;                 // exact value of the norm squared
  double value = 0.0;              // sqrt of square
  std::vector<Family> partition;   // optimal admissible families
  std::vector<Rational> masses;    // l1 mass of x on each family
};

namespace detail {

inline int require_uniform_support(const SubsetVec& x) {
  if (x.empty()) return 0;
  int r = x.begin()->first.size();
  for (auto& [s, v] : x)
    if (s.size() != r)
      throw InvalidInput("schreier_norm: support has mixed cardinalities");
  return r;
}

}  // namespace detail

inline SchreierNormResult schreier_norm(const SubsetVec& x, int support_cap = 12) {
  SchreierNormResult res;
  res.square = Rational(0);
  detail::require_uniform_support(x);
  int n = (int)x.support_size();
  if (n == 0) return res;
  if (n > support_cap)
    throw ScaleRefusal("schreier_norm: support size " + std::to_string(n) +
                       " exceeds cap " + std::to_string(support_cap));
  std::vector<FinSubset> supp = x.support();
  std::vector<Rational> av;
  for (const auto& s : supp) av.push_back(abs(x.at(s)));

  int full = (1 << n) - 1;
  std::vector<Rational> mass(full + 1, Rational(0));
  for (int m = 1; m <= full; ++m) {
    int low = m & -m;
    mass[m] = mass[m ^ low] + av[__builtin_ctz((unsigned)m)];
  }
  std::vector<char> adm(full + 1, 0);
  for (int m = 1; m <= full; ++m) {
    Family fam;
    for (int i = 0; i < n; ++i)
      if (m & (1 << i)) fam.push_back(supp[i]);
    adm[m] = is_schreier_plegmatic(fam, FeasibilityMode::kGreedy) ? 1 : 0;
  }

  std::vector<Rational> dp(full + 1, Rational(0));
  std::vector<int> choice(full + 1, 0);
  for (int m = 1; m <= full; ++m) {
    int low = m & -m;
    Rational best(-1);
    int best_sub = 0;
    // Families containing the lowest remaining support point.
    for (int sub = m; sub; sub = (sub - 1) & m) {
      if (!(sub & low) || !adm[sub]) continue;
      Rational cand = mass[sub] * mass[sub] + dp[m ^ sub];
      if (cand > best) {
        best = cand;
        best_sub = sub;
      }
    }
    dp[m] = best;
    choice[m] = best_sub;
  }

  res.square = dp[full];
  res.value = std::sqrt(res.square.to_double());
  for (int m = full; m;) {
    int sub = choice[m];
    Family fam;
    for (int i = 0; i < n; ++i)
      if (sub & (1 << i)) fam.push_back(supp[i]);
    res.partition.push_back(fam);
    res.masses.push_back(mass[sub]);
    m ^= sub;
  }
  return res;
}

class SchreierEngine : public NormEngine<FinSubset> {
 public:
  explicit SchreierEngine(int support_cap = 12) : cap_(support_cap) {}
  std::string name() const override { return "schreier-plegmatic"; }
  NormValue norm(const SubsetVec& x) const override {
    return exact_value(schreier_norm(x, cap_).value);
  }

 private:
  int cap_;
};

// ---------------------------------------------------------------------------
// Norming functional certificates
// ---------------------------------------------------------------------------

// A functional f = (1/sqrt(scale)) * sum_i mass_i * f_i with
// f_i = sum over s in families[i] of sign_s e*_s. With scale = sum mass_i^2
// the functional lies in the norming set and attains f(x) = sqrt(scale).
struct DualCertificate {
  std::vector<Family> families;
  std::vector<std::vector<int>> signs;  // per family, per member, +1 / -1
  std::vector<Rational> masses;
  Rational scale;  // = sum of masses squared = norm(x)^2
};

inline DualCertificate norming_functional(const SubsetVec& x, int support_cap = 12) {
  auto res = schreier_norm(x, support_cap);
  DualCertificate cert;
  cert.families = res.partition;
  cert.masses = res.masses;
  cert.scale = res.square;
  for (const auto& fam : cert.families) {
    std::vector<int> sg;
    for (const auto& s : fam) sg.push_back(x.at(s) < Rational(0) ? -1 : 1);
    cert.signs.push_back(sg);
  }
  return cert;
}

// Exact verification, all in rational arithmetic:
//  - families admissible and pairwise disjoint,
//  - masses match |x| restricted to each family and sum of squares == scale,
//  - the attained value satisfies (sum_i mass_i * f_i(x))^2 == scale^2,
//    which is the squared form of f(x) == norm(x).
inline bool verify_certificate(const DualCertificate& cert, const SubsetVec& x,
                               std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::set<std::string> seen;
  Rational sq_sum(0), attained(0);
  for (size_t i = 0; i < cert.families.size(); ++i) {
    const Family& fam = cert.families[i];
    if (fam.size() != cert.signs[i].size()) return fail("sign vector size mismatch");
    if (!is_schreier_plegmatic(fam, FeasibilityMode::kGreedy))
      return fail("family " + std::to_string(i) + " not admissible");
    Rational m(0), val(0);
    for (size_t j = 0; j < fam.size(); ++j) {
      if (!seen.insert(fam[j].to_string()).second) return fail("families overlap");
      m = m + abs(x.at(fam[j]));
      val = val + Rational(cert.signs[i][j]) * x.at(fam[j]);
    }
    if (m != cert.masses[i]) return fail("mass mismatch in family " + std::to_string(i));
    sq_sum = sq_sum + cert.masses[i] * cert.masses[i];
    attained = attained + cert.masses[i] * val;
  }
  if (sq_sum != cert.scale) return fail("scale is not the sum of squared masses");
  if (attained * attained != cert.scale * cert.scale)
    return fail("functional does not attain the norm");
  if (attained < Rational(0)) return fail("attained value negative");
  return true;
}

}  // namespace plegma
