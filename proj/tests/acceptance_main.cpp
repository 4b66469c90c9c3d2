// Acceptance gate: one self-contained check per shipped guarantee, each
// printing exactly one PASS/FAIL line with its wall time. Runs the full
// scale of the shared self-check suite sequentially and enforces the
// per-check time budgets. Exits nonzero if any line fails.

#include <cstdio>
#include <string>

#include "plegma/selfcheck.hpp"

int main() {
  using namespace plegma::selfcheck;

  int failures = 0;
  int total = 0;
  for (const Check& c : checks()) {
    Outcome res = run_check(c, /*quick=*/false);
    bool ok = res.pass;
    std::string detail = res.detail;
    if (ok && c.full_budget_s > 0.0 && res.seconds > c.full_budget_s) {
      ok = false;
      detail = "exceeded the " + std::to_string(c.full_budget_s) + "s budget";
    }
    std::printf("%s  %2d  %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", res.number,
                res.name.c_str(), res.seconds, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
    ++total;
  }
  if (failures) {
    std::printf("%d of %d criteria failed\n", failures, total);
    return 1;
  }
  std::printf("all %d criteria passed\n", total);
  return 0;
}
