// Selftest battery driver: prints one verdict line per criterion and exits
// nonzero when any fail.  --criterion N runs a single check; --extended adds
// the finer-grid repeats of the resolution-sensitive ones.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "hfb/acceptance.hpp"
#include "hfb/errors.hpp"

int main(int argc, char** argv) {
  bool extended = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--extended")) {
      extended = true;
    } else if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N] [--extended]\n", argv[0]);
      return 2;
    }
  }

  std::vector<hfb::CriterionResult> results;
  try {
    if (only != 0)
      results.push_back(hfb::run_criterion(only, extended));
    else
      results = hfb::run_acceptance(extended);
  } catch (const hfb::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  int failures = 0;
  for (const auto& r : results) {
    std::printf("c%02d %s %s -- %s\n", r.id, r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failures;
  }
  if (only == 0)
    std::printf("%zu checks, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
