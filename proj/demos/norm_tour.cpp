// A guided tour of the norm engines: the same handful of vectors pushed
// through the classical norms, the exact partition norm with its witness,
// and the weighted two-sided enclosure with a re-verified certificate.
//
// Build target: demo_norm_tour (no arguments, deterministic output).

#include <cstdio>
#include <memory>
#include <vector>

#include "plegma/engines.hpp"
#include "plegma/io.hpp"
#include "plegma/schreier_norm.hpp"
#include "plegma/tsirelson.hpp"

using namespace plegma;

namespace {

void classical_engines() {
  std::printf("-- classical engines on x = 3/5 e1 + 4/5 e2 - e7 --\n");
  IntVec x;
  x.set(1, Rational(3, 5));
  x.set(2, Rational(4, 5));
  x.set(7, Rational(-1));

  std::vector<std::unique_ptr<NormEngine<int>>> engines;
  engines.push_back(std::make_unique<L1Engine>());
  engines.push_back(std::make_unique<L2Engine>());
  engines.push_back(std::make_unique<LinfEngine>());
  engines.push_back(std::make_unique<LpEngine>(3.0));
  engines.push_back(std::make_unique<SummingEngine>());
  for (const auto& e : engines) {
    NormValue nv = e->norm(x);
    std::printf("  %-12s %s\n", e->name().c_str(), double_repr(nv.hi).c_str());
  }
}

void partition_norm_with_witness() {
  std::printf("\n-- partition norm: interlacing decides the value --\n");
  // An admissible family is an interlaced tuple whose length is at most the
  // least element of its first member. (1,3),(2,4) interlace, but the family
  // of both would have size 2 against a least element of 1, so each member
  // sits in its own family and the norm is the euclidean combination
  // sqrt(1^2 + 1^2).
  SubsetVec blocked;
  blocked.set(FinSubset{1, 3}, Rational(1));
  blocked.set(FinSubset{2, 4}, Rational(1));
  SchreierNormResult r1 = schreier_norm(blocked);
  std::printf("  blocked pair:       value %s  (square %s)\n",
              double_repr(r1.value).c_str(), r1.square.to_string().c_str());

  // Shift the same shape one step up: (2,4),(3,5) interlace and size 2 is
  // allowed from least element 2 on, so one family absorbs both masses and
  // the norm is the l1 sum.
  SubsetVec stacked;
  stacked.set(FinSubset{2, 4}, Rational(1));
  stacked.set(FinSubset{3, 5}, Rational(1));
  SchreierNormResult r2 = schreier_norm(stacked);
  std::printf("  admissible pair:    value %s  (square %s)\n",
              double_repr(r2.value).c_str(), r2.square.to_string().c_str());
  for (size_t i = 0; i < r2.partition.size(); ++i) {
    std::printf("    family %zu:", i + 1);
    for (const FinSubset& m : r2.partition[i])
      std::printf(" %s", m.to_string().c_str());
    std::printf("  mass %s\n", r2.masses[i].to_string().c_str());
  }

  // The dual side: a functional built from the witness partition attains the
  // norm, and the verifier re-checks it independently.
  DualCertificate cert = norming_functional(blocked);
  std::string why;
  bool ok = verify_certificate(cert, blocked, &why);
  std::printf("  dual certificate:   scale %s, %zu families, verified %s\n",
              cert.scale.to_string().c_str(), cert.families.size(),
              ok ? "yes" : why.c_str());
}

void weighted_enclosure() {
  std::printf("\n-- weighted norm: two-sided enclosure + certificate --\n");
  TsirelsonConfig cfg = TsirelsonConfig::preset("standard");
  cfg.validate();
  std::printf("  preset levels %d, weight budget %s\n", cfg.levels(),
              cfg.budget().to_string().c_str());

  IntVec x;
  for (int i = 1; i <= 24; ++i) x.set(i, Rational(1));
  TsirelsonResult enc = tsirelson_norm(x, cfg);
  std::printf("  ||sum e_1..e_24||  in  [%s, %s]\n",
              double_repr(enc.lo).c_str(), double_repr(enc.hi).c_str());

  TsirelsonCertificate cert = tsirelson_certificate(x, cfg);
  std::string why;
  bool ok = verify_tsirelson_certificate(cert, x, &why);
  std::printf("  split-tree lower bound %s over %zu nodes, verified %s\n",
              double_repr(cert.lo).c_str(), cert.nodes.size(),
              ok ? "yes" : why.c_str());

  // The guard: a weight sequence whose reciprocal sum exceeds the budget cap
  // is rejected before any computation runs.
  try {
    TsirelsonConfig bad = TsirelsonConfig::preset("bad-budget");
    bad.validate();
    std::printf("  bad-budget preset unexpectedly accepted\n");
  } catch (const InvalidInput& e) {
    std::printf("  bad-budget preset rejected: %s\n", e.what());
  }
}

}  // namespace

int main() {
  classical_engines();
  partition_norm_with_witness();
  weighted_enclosure();
  return 0;
}
