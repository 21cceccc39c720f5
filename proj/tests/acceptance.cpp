// Acceptance gate: runs the full validation suite at its default
// configuration and prints one PASS/FAIL line per criterion (with the
// measured numbers), exiting nonzero if any criterion fails.

#include <cstdio>
#include <exception>

#include "gelfree/validate.hpp"

int main() {
  gelfree::RunConfig cfg;
  cfg.subcommand = "validate";
  try {
    const gelfree::ValidationReport report = gelfree::validate(cfg);
    std::fputs(gelfree::render_report(report, cfg).c_str(), stdout);
    return report.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance harness failed to run: %s\n", e.what());
    return 1;
  }
}
