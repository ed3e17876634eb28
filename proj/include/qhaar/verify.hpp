#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qhaar {

// Outcome of one acceptance check.  Tolerances are pinned inside the check
// implementations; `detail` carries the measured numbers behind the verdict.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Oracle vs the closed form for moments of products of traces of powers,
// every multiplicity pair of weight <= 3, 1e-9 relative.
CheckResult check_trace_power_moments(const std::vector<int>& qs = {4, 6});

// Weingarten table: Gram defining relation for n <= 4 (1e-9), and the
// leading-term remainder band |wg - leading| * q^{n+|sigma|+2} staying within
// a factor 3 of its first value across the q sweep for every cycle type.
CheckResult check_weingarten_asymptotics(const std::vector<int>& exact_qs = {6, 9},
                                         const std::vector<int>& band_qs = {8, 16, 32, 64});

// Correlator averages: odd-length sequences vanish exactly (1e-12), the
// four-point test set obeys q^2|value| <= 10, and the alternating four-point
// anchor equals -1/(q^2-1) to 1e-12.
CheckResult check_correlator_averages();

// Second moments: q^2 * <|corr|^2> equals q^2/(q^2-1) exactly for the
// two-point sequence; the alternating four-point compensated value follows a
// fitted 2 + C/q trend within 3 sigma (Monte Carlo); an inequivalent pair's
// compensated value decays.
CheckResult check_second_moment_symmetry(long long n_samples = 20000,
                                         std::uint64_t seed = 20260814);

// Third moment of the two-point correlator with conjugation pattern (+,-,+):
// q^2|value| stays within a factor 3 of its first value across the q sweep.
CheckResult check_higher_moment_decay(const std::vector<int>& qs = {6, 8, 12});

// OTOC leading order: the undecorated value equals -1/(q^2-1) exactly, the
// one-layer pair-space value tracks the oracle inside a q^{-3} band, and the
// dual-basis projector inverts the pair overlaps to 1e-12.
CheckResult check_otoc_leading_order(const std::vector<int>& band_qs = {4, 8, 16});

// Diagram engine: planarity <=> full reducibility <=> N = E+1 (exhaustive,
// E <= 5), rewrite soundness and the reduced-diagram loop bound on random
// diagrams, and enumerate_leading(2..3) equal to the ladder family.
CheckResult check_cobweb_engine(int samples = 200, std::uint64_t seed = 1);

// Byte-identical CLI reruns for a fixed seeded config, plus Monte Carlo
// moments of |Tr U^m|^2 hitting m within 4 sigma.
CheckResult check_reproducibility(const std::string& cli_path);

// all checks in report order; cli_path locates the command-line binary used
// by the reproducibility check
std::vector<CheckResult> check_all(const std::string& cli_path);

}  // namespace qhaar
