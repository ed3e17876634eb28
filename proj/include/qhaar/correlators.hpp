#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

#include "qhaar/expr.hpp"
#include "qhaar/haar_mc.hpp"

namespace qhaar {

// Integer time sequence t_1..t_n of a correlator (1/q)Tr(Z(t_1)...Z(t_n)).
// Valid sequences have no consecutive equal times, including the wraparound
// pair (t_n, t_1).  Canonical form starts at the minimal time, ties broken by
// the lexicographically smallest rotation.
struct TimeSequence {
  std::vector<int> times;
  bool canonical = false;
};

// validated but left in the given rotation
TimeSequence time_sequence(std::vector<int> times);
// validated and rotated to canonical form
TimeSequence canonicalize(std::vector<int> times);

// Cyclic differences x_i = t_{i+1} - t_i (wraparound x_n = t_1 - t_n);
// they sum to zero and the expression built from them uses
// n_unitaries = sum |x_i| / 2 averaged unitary pairs.
struct DifferenceVector {
  std::vector<int> x;
  int n_unitaries = 0;
};

DifferenceVector differences(const TimeSequence& t);  // requires canonical

// traceless involutory diagonal (+1 on the first q/2 entries, -1 on the rest);
// requires even q
Eigen::MatrixXcd default_z(int q);

// (1/q) Tr(Z U^{x_1} Z U^{x_2} ...) with Z unbound (operators["Z"] supplied
// by the caller); the shared builder behind the exact and MC paths
MomentExpression correlator_expression(const std::vector<int>& x);

// product of p correlators, factor i conjugated where conj[i] is true
MomentExpression product_expression(const std::vector<TimeSequence>& ts,
                                    const std::vector<bool>& conj);

// (1/q) Tr(prod_i U^{t_i} Z U^{-t_i}) at a concrete unitary
std::complex<double> evaluate(const TimeSequence& t, const Eigen::MatrixXcd& u,
                              const Eigen::MatrixXcd& z);

// Haar average of a single correlator / a conjugation-flagged product,
// evaluated exactly through the permutation-sum oracle
std::complex<double> avg_correlator_exact(const TimeSequence& t, int q,
                                          const Eigen::MatrixXcd& z);
std::complex<double> avg_product_exact(const std::vector<TimeSequence>& ts,
                                       const std::vector<bool>& conj, int q,
                                       const Eigen::MatrixXcd& z);

// number of cyclic rotations of t that reproduce t up to a global time shift;
// divides n and is >= 1 (requires canonical)
int symmetry_factor(const TimeSequence& t);

// true iff some rotation of t equals t2 after a constant shift of all entries
bool cyclic_equivalent(const TimeSequence& t, const TimeSequence& t2);

enum class ProbeMode { exact, mc };

struct ScalingRow {
  int q = 0;
  std::complex<double> value{0, 0};
  std::complex<double> value_q2{0, 0};  // value * q^2, the compensated column
};

// Per-q table of the correlator average (or, with second_moment, of
// <correlator * conj(correlator)>) together with the q^2-compensated column.
// qs must be ascending and each q >= n_unitaries (and even, for default Z).
std::vector<ScalingRow> scaling_probe(const TimeSequence& t, const std::vector<int>& qs,
                                      ProbeMode mode, bool second_moment = false,
                                      long long n_samples = 4096, std::uint64_t seed = 0);

}  // namespace qhaar
