// Timing harness: OpenMP kernels against their serial references.
//  - exact oracle: haar_average (parallel over permutations) vs
//    haar_average_serial on growing moment expressions
//  - Monte Carlo: estimate() with 1 thread vs all hardware threads
// Both comparisons also assert the results agree bit-for-bit.
#include <omp.h>

#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "qhaar/correlators.hpp"
#include "qhaar/haar_mc.hpp"
#include "qhaar/oracle.hpp"

using namespace qhaar;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double seconds(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

MomentExpression moment_power(int copies, int q) {
  const TimeSequence t = canonicalize({0, 1, 0, 1});
  std::vector<TimeSequence> ts(copies, t);
  std::vector<bool> conj(copies);
  for (int i = 0; i < copies; ++i) conj[i] = (i % 2 == 1);
  MomentExpression expr = product_expression(ts, conj);
  expr.operators["Z"] = default_z(q);
  return expr;
}

}  // namespace

int main() {
  const int q = 8;
  std::printf("exact oracle, alternating four-point moment power p (N = 2p unitary pairs)\n");
  std::printf("the optimized kernel and the plain reference sum in different orders, so they\n");
  std::printf("agree to roundoff rather than bit-for-bit\n");
  std::printf("%4s %6s %12s %12s %9s %10s\n", "p", "N", "parallel[s]", "serial[s]", "speedup",
              "|diff|");
  for (int copies : {1, 2, 3}) {
    const MomentExpression expr = moment_power(copies, q);
    ExactAverage par, ser;
    const double tp = seconds([&] { par = haar_average(expr, q); });
    const double ts = seconds([&] { ser = haar_average_serial(expr, q); });
    const double diff = static_cast<double>(std::abs(par.value - ser.value));
    std::printf("%4d %6d %12.4f %12.4f %9.2f %10.2e\n", copies, par.n_unitaries, tp, ts, ts / tp,
                diff);
    if (!(diff <= 1e-12)) return 1;
  }

  const int threads = omp_get_num_procs();
  const long long n_samples = 40000;
  const MomentExpression expr = moment_power(2, q);
  HaarEstimate one, many;
  std::printf("\nMonte Carlo sampler, %lld samples at q = %d\n", n_samples, q);
  std::printf("%8s %10s %10s %9s %10s\n", "threads", "time[s]", "mean.re", "speedup", "identical");
  omp_set_num_threads(1);
  const double t1 = seconds([&] { one = estimate(expr, q, n_samples, 2026); });
  omp_set_num_threads(threads);
  const double tn = seconds([&] { many = estimate(expr, q, n_samples, 2026); });
  const bool same = one.mean == many.mean && one.std_error_re == many.std_error_re;
  std::printf("%8d %10.4f %10.6f %9s %10s\n", 1, t1, one.mean.real(), "-", "-");
  std::printf("%8d %10.4f %10.6f %9.2f %10s\n", threads, tn, many.mean.real(), t1 / tn,
              same ? "yes" : "NO");
  return same ? 0 : 1;
}
