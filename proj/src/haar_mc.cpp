#include "qhaar/haar_mc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qhaar {

Eigen::MatrixXcd sample_unitary(int q, GaussianStream& stream) {
  if (q < 1) throw std::domain_error("q must be >= 1");
  Eigen::MatrixXcd g(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const double re = stream.next();
      const double im = stream.next();
      g(i, j) = std::complex<double>(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(q, q);
  for (int j = 0; j < q; ++j) {
    const std::complex<double> d = qr.matrixQR()(j, j);
    u.col(j) *= d / std::abs(d);
  }
  return u;
}

HaarEstimate estimate(const MomentExpression& expr, int q, long long n_samples,
                      std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<std::complex<double>> values(static_cast<size_t>(n_samples));
#pragma omp parallel for schedule(dynamic, 16)
  for (long long s = 0; s < n_samples; ++s) {
    GaussianStream gs(seed, static_cast<std::uint64_t>(s));
    const Eigen::MatrixXcd u = sample_unitary(q, gs);
    values[static_cast<size_t>(s)] = evaluate_at(expr, u);
  }

  std::complex<long double> sum{0, 0};
  for (const auto& v : values) sum += std::complex<long double>(v);
  const std::complex<long double> mean = sum / static_cast<long double>(n_samples);

  long double var_re = 0, var_im = 0;
  for (const auto& v : values) {
    const long double dr = v.real() - mean.real();
    const long double di = v.imag() - mean.imag();
    var_re += dr * dr;
    var_im += di * di;
  }
  const long double denom = static_cast<long double>(n_samples - 1) * n_samples;

  HaarEstimate est;
  est.mean = {static_cast<double>(mean.real()), static_cast<double>(mean.imag())};
  est.std_error_re = static_cast<double>(std::sqrt(var_re / denom));
  est.std_error_im = static_cast<double>(std::sqrt(var_im / denom));
  est.n_samples = n_samples;
  est.seed = seed;
  est.q = q;
  return est;
}

}  // namespace qhaar
