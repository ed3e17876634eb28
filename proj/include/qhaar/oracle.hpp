#pragma once

#include <complex>
#include <vector>

#include "qhaar/expr.hpp"
#include "qhaar/perm.hpp"

namespace qhaar {

using complex_t = std::complex<long double>;

struct ExactAverage {
  complex_t value{0, 0};
  int n_unitaries = 0;     // matched unit factors N of U (and of U^{-1})
  long long term_count = 0;  // enumerated (sigma, tau) pairs, (N!)^2
};

// Exact Haar average of a moment expression via the two-sided permutation
// sum: the 2N unitary factors are removed, index lines are rewired by
// (sigma, tau), each closed line contributes the trace of the fixed operators
// along it, and each term carries Wg(q, tau sigma^{-1}).
//
// Expressions with unbalanced U / U^{-1} counts average to exactly zero and
// return early.  Requires q >= N; N <= 6 is the supported envelope, N = 7 is
// accepted on a best-effort (slower) basis.
//
// The sum is organized as sum_alpha Wg(alpha) sum_sigma G(sigma, alpha sigma)
// with one partial per alpha, reduced in enumeration order, so the result is
// bit-identical for any thread count.
ExactAverage haar_average(const MomentExpression& expr, int q);

// Plain nested (sigma, tau) loop over the same sum; no partials, no memo.
// Reference implementation for tests and benchmarks.
ExactAverage haar_average_serial(const MomentExpression& expr, int q);

// Closed form for moments of traces of powers:
//   int prod_m Tr(U^m)^{a_m} Tr(U^{-m})^{b_m} dU = [a == b] prod_m m^{a_m} a_m!
// a[i] and b[i] hold the multiplicities of m = i + 1 (trailing zeros are
// insignificant).  Valid for q >= max(sum m a_m, sum m b_m); throws below.
long double trace_power_moment(const std::vector<int>& a, const std::vector<int>& b, int q);

// q^{num_cycles(tau)} when every cycle of tau has even length, else 0.
long double h_value(const Permutation& tau, long double q);

}  // namespace qhaar
