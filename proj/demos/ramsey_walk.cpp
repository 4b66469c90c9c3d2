// A walk through the combinatorial side: enumeration, the path metric,
// monochromatic sub-universes, the constant-or-injective dichotomy, and the
// density threshold where large subsets are forced to contain interlaced
// tuples.
//
// Build target: demo_ramsey_walk (no arguments, deterministic output).

#include <cstdio>
#include <string>

#include "plegma/core.hpp"
#include "plegma/ramsey.hpp"

using namespace plegma;

namespace {

std::string tuple_repr(const PlegmaTuple& t) {
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + t[i].to_string();
  return s;
}

void enumeration() {
  std::printf("-- every interlaced pair of 2-subsets of {1..5} --\n");
  Universe u = Universe::initial_segment(5);
  for_each_plegma(u, 2, 2, [](const PlegmaTuple& t) {
    std::printf("  %s\n", tuple_repr(t).c_str());
    return true;
  });
}

void path_metric() {
  std::printf("\n-- chains of interlaced pairs as a metric --\n");
  Universe u = Universe::initial_segment(60);
  FinSubset a{1, 9}, b{40, 50};
  std::vector<FinSubset> path = plegma_path_between(a, b, u);
  std::printf("  %s -> %s in %zu steps:", a.to_string().c_str(),
              b.to_string().c_str(), path.size() - 1);
  for (const FinSubset& v : path) std::printf("  %s", v.to_string().c_str());
  std::printf("\n");
  auto d = plegma_distance(a, b, u);
  std::printf("  breadth-first distance agrees: %d\n", d ? *d : -1);
}

void monochromatic() {
  std::printf("\n-- forcing one color on all interlaced pairs --\n");
  // Color a pair of 2-subsets by the parity of the sum of all four entries.
  TupleColoring parity = [](const PlegmaTuple& t) {
    long long s = 0;
    for (const FinSubset& m : t)
      for (int v : m) s += v;
    return (int)(s % 2);
  };
  Universe u = Universe::initial_segment(12);
  auto sub = monochromatize(u, 2, 2, parity, 5);
  if (!sub) {
    std::printf("  no monochromatic sub-universe of size 5 in {1..12}\n");
    return;
  }
  std::printf("  sub-universe:");
  for (int v : *sub) std::printf(" %d", v);
  int color = -1;
  for_each_plegma(Universe::explicit_set(*sub), 2, 2,
                  [&](const PlegmaTuple& t) {
                    color = parity(t);
                    return false;
                  });
  std::printf("   (every interlaced pair has parity %d)\n", color);
}

void dichotomy() {
  std::printf("\n-- constant or injective across interlaced pairs --\n");
  // Label each 2-subset by its span mod 7. On a suitable sub-universe the
  // label is either constant or never repeats across an interlaced pair.
  SubsetLabeling span = [](const FinSubset& s) {
    return (s.max() - s.min()) % 7;
  };
  DichotomyResult res = dichotomy_search(Universe::initial_segment(14), 2, span);
  bool constant = res.kind == DichotomyResult::Kind::kConstant;
  std::printf("  alternative: %s",
              constant ? "constant" : "injective on interlaced pairs");
  if (constant) std::printf(" (label %d)", res.label);
  std::printf("\n  sub-universe:");
  for (int v : res.sub_universe) std::printf(" %d", v);
  std::printf("\n");
}

void density() {
  std::printf("\n-- how dense before interlaced pairs are unavoidable --\n");
  DensityScanResult scan =
      density_threshold_scan(2, 2, Rational(4, 5), 8);
  for (const DensityRow& r : scan.rows)
    std::printf("  n=%d  2-subsets=%lld  largest free=%d  4/5-bound=%s  %s\n",
                r.n, r.total, r.largest_free, r.bound.to_string().c_str(),
                r.dense_enough ? "forced" : "avoidable");
  if (scan.threshold_n)
    std::printf("  threshold: every 4/5-fraction of the 2-subsets of {1..%d} "
                "contains an interlaced pair\n",
                *scan.threshold_n);
  if (!scan.counterexample.empty()) {
    std::printf("  witness below the threshold:");
    for (const FinSubset& m : scan.counterexample)
      std::printf(" %s", m.to_string().c_str());
    std::printf("\n");
  }
}

}  // namespace

int main() {
  enumeration();
  path_metric();
  monochromatic();
  dichotomy();
  density();
  return 0;
}
