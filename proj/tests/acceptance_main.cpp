// Acceptance gate: runs every check in qhaar/verify.hpp against its pinned
// tolerance and wall-clock budget, one report line per criterion.  Exits
// nonzero if anything fails.
#include <cstdio>
#include <vector>

#include "qhaar/verify.hpp"

int main() {
  const std::vector<double> time_limits = {5.0, 5.0, 60.0, 600.0, 30.0, 120.0, 60.0, 600.0};
  const auto results = qhaar::check_all(QHAAR_CLI_PATH);
  if (results.size() != time_limits.size()) {
    std::fprintf(stderr, "unexpected check count %zu\n", results.size());
    return 1;
  }

  bool all_ok = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const bool in_time = r.seconds < time_limits[i];
    const bool ok = r.passed && in_time;
    all_ok = all_ok && ok;
    std::printf("[%s] %-24s %7.2fs  %s%s\n", ok ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str(),
                in_time ? "" : "  (exceeded time budget)");
  }
  return all_ok ? 0 : 1;
}
