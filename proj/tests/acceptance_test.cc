// Runs the full acceptance suite and prints one line per criterion:
//   PASS criterion N: <name> (<detail>, <seconds>s)
// The gradient-mutation self-test is reported as an auxiliary line. Exits
// non-zero when any check fails.

#include <cstdio>

#include "igd/verify.h"

int main() {
  igd::VerifyOptions options = igd::VerifyOptions::full();
  bool all_passed = true;
  igd::run_verification(options, [&](const igd::CheckResult& r) {
    all_passed = all_passed && r.passed;
    if (r.criterion > 0) {
      std::printf("%s criterion %d: %s (%s, %.1fs)\n", r.passed ? "PASS" : "FAIL", r.criterion,
                  r.name.c_str(), r.detail.c_str(), r.seconds);
    } else {
      std::printf("%s auxiliary: %s (%s, %.1fs)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.detail.c_str(), r.seconds);
    }
    std::fflush(stdout);
  });
  return all_passed ? 0 : 1;
}
