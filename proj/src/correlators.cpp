#include "qhaar/correlators.hpp"

#include <algorithm>
#include <stdexcept>

#include "qhaar/oracle.hpp"

namespace qhaar {
namespace {

void validate_times(const std::vector<int>& times) {
  const size_t n = times.size();
  if (n < 2) throw std::invalid_argument("time sequence needs at least two entries");
  for (size_t i = 0; i < n; ++i)
    if (times[i] == times[(i + 1) % n])
      throw std::invalid_argument("consecutive equal times (cyclically) are not allowed");
}

std::vector<int> rotated(const std::vector<int>& v, size_t s) {
  std::vector<int> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[(s + i) % v.size()];
  return out;
}

std::vector<int> diff_vector(const std::vector<int>& times) {
  const size_t n = times.size();
  std::vector<int> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = times[(i + 1) % n] - times[i];
  return x;
}

void require_canonical(const TimeSequence& t, const char* who) {
  if (!t.canonical) throw std::invalid_argument(std::string(who) + " requires a canonical sequence");
}

}  // namespace

TimeSequence time_sequence(std::vector<int> times) {
  validate_times(times);
  TimeSequence t;
  t.times = std::move(times);
  t.canonical = (t.times == canonicalize(t.times).times);
  return t;
}

TimeSequence canonicalize(std::vector<int> times) {
  validate_times(times);
  const size_t n = times.size();
  size_t best = 0;
  for (size_t s = 1; s < n; ++s) {
    for (size_t j = 0; j < n; ++j) {
      const int a = times[(s + j) % n];
      const int b = times[(best + j) % n];
      if (a != b) {
        if (a < b) best = s;
        break;
      }
    }
  }
  TimeSequence t;
  t.times = rotated(times, best);
  t.canonical = true;
  return t;
}

DifferenceVector differences(const TimeSequence& t) {
  require_canonical(t, "differences");
  DifferenceVector d;
  d.x = diff_vector(t.times);
  int total = 0;
  for (int xi : d.x) total += std::abs(xi);
  d.n_unitaries = total / 2;
  return d;
}

Eigen::MatrixXcd default_z(int q) {
  if (q < 2 || q % 2 != 0) throw std::invalid_argument("default operator requires even q >= 2");
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(q, q);
  for (int i = 0; i < q; ++i) z(i, i) = (i < q / 2) ? 1.0 : -1.0;
  return z;
}

MomentExpression correlator_expression(const std::vector<int>& x) {
  MomentExpression expr;
  expr.qpow = -1;
  TraceWord word;
  for (int p : x) {
    word.push_back(fixed_op("Z"));
    word.push_back(u_pow(p));
  }
  expr.words.push_back(std::move(word));
  return expr;
}

MomentExpression product_expression(const std::vector<TimeSequence>& ts,
                                    const std::vector<bool>& conj) {
  if (ts.size() != conj.size())
    throw std::invalid_argument("one conjugation flag per sequence is required");
  if (ts.empty()) throw std::invalid_argument("empty product");
  MomentExpression expr;
  expr.qpow = -static_cast<int>(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    TraceWord word;
    for (int p : diff_vector(ts[i].times)) {
      word.push_back(fixed_op("Z"));
      word.push_back(u_pow(p));
    }
    expr.words.push_back(conj[i] ? conjugated(word) : std::move(word));
  }
  return expr;
}

std::complex<double> evaluate(const TimeSequence& t, const Eigen::MatrixXcd& u,
                              const Eigen::MatrixXcd& z) {
  if (u.rows() != u.cols() || z.rows() != z.cols() || u.rows() != z.rows())
    throw std::invalid_argument("unitary and operator dimensions must match");
  auto expr = correlator_expression(diff_vector(t.times));
  expr.operators["Z"] = z;
  return evaluate_at(expr, u);
}

std::complex<double> avg_correlator_exact(const TimeSequence& t, int q,
                                          const Eigen::MatrixXcd& z) {
  auto expr = correlator_expression(diff_vector(t.times));
  expr.operators["Z"] = z;
  const auto avg = haar_average(expr, q);
  return {static_cast<double>(avg.value.real()), static_cast<double>(avg.value.imag())};
}

std::complex<double> avg_product_exact(const std::vector<TimeSequence>& ts,
                                       const std::vector<bool>& conj, int q,
                                       const Eigen::MatrixXcd& z) {
  auto expr = product_expression(ts, conj);
  expr.operators["Z"] = z;
  const auto avg = haar_average(expr, q);
  return {static_cast<double>(avg.value.real()), static_cast<double>(avg.value.imag())};
}

int symmetry_factor(const TimeSequence& t) {
  require_canonical(t, "symmetry_factor");
  const size_t n = t.times.size();
  int count = 0;
  for (size_t s = 0; s < n; ++s) {
    const auto r = rotated(t.times, s);
    const int shift = r[0] - t.times[0];
    bool match = true;
    for (size_t i = 0; i < n; ++i)
      if (r[i] - t.times[i] != shift) {
        match = false;
        break;
      }
    if (match) ++count;
  }
  return count;
}

bool cyclic_equivalent(const TimeSequence& t, const TimeSequence& t2) {
  if (t.times.size() != t2.times.size()) return false;
  const size_t n = t.times.size();
  for (size_t s = 0; s < n; ++s) {
    const auto r = rotated(t.times, s);
    const int shift = r[0] - t2.times[0];
    bool match = true;
    for (size_t i = 0; i < n; ++i)
      if (r[i] - t2.times[i] != shift) {
        match = false;
        break;
      }
    if (match) return true;
  }
  return false;
}

std::vector<ScalingRow> scaling_probe(const TimeSequence& t, const std::vector<int>& qs,
                                      ProbeMode mode, bool second_moment,
                                      long long n_samples, std::uint64_t seed) {
  if (qs.empty()) throw std::invalid_argument("empty q list");
  const int n_u = [&] {
    int total = 0;
    for (int xi : diff_vector(t.times)) total += std::abs(xi);
    return total / 2;
  }();
  for (size_t i = 0; i < qs.size(); ++i) {
    if (i > 0 && qs[i] <= qs[i - 1]) throw std::invalid_argument("q list must be ascending");
    if (qs[i] < n_u) throw std::domain_error("q below the number of unitary pairs");
  }

  MomentExpression expr;
  if (second_moment)
    expr = product_expression({t, t}, {false, true});
  else
    expr = correlator_expression(diff_vector(t.times));

  std::vector<ScalingRow> rows;
  rows.reserve(qs.size());
  for (int q : qs) {
    expr.operators["Z"] = default_z(q);
    ScalingRow row;
    row.q = q;
    if (mode == ProbeMode::exact) {
      const auto avg = haar_average(expr, q);
      row.value = {static_cast<double>(avg.value.real()), static_cast<double>(avg.value.imag())};
    } else {
      row.value = estimate(expr, q, n_samples, seed).mean;
    }
    row.value_q2 = row.value * static_cast<double>(q) * static_cast<double>(q);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qhaar
