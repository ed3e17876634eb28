#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

#include "qhaar/expr.hpp"
#include "qhaar/rng.hpp"

namespace qhaar {

struct HaarEstimate {
  std::complex<double> mean{0.0, 0.0};
  double std_error_re = 0.0;  // sample standard deviation / sqrt(n), per component
  double std_error_im = 0.0;
  long long n_samples = 0;
  std::uint64_t seed = 0;
  int q = 0;
};

// Haar-distributed unitary: complex Ginibre matrix -> Householder QR ->
// columns rescaled by the phases of the R diagonal (the correction that makes
// QR-based sampling exactly Haar).
Eigen::MatrixXcd sample_unitary(int q, GaussianStream& stream);

// Monte Carlo mean of expr over i.i.d. Haar unitaries.  Sample s draws from
// the counter-based stream (seed, s), and per-sample values are reduced in
// index order, so results are bit-identical for any worker count.
HaarEstimate estimate(const MomentExpression& expr, int q, long long n_samples,
                      std::uint64_t seed);

}  // namespace qhaar
