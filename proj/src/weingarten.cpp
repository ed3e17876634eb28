#include "qhaar/weingarten.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace qhaar {
namespace {

// Partitions of n in descending lexicographic order, each part list sorted
// descending.
void partitions_rec(int rest, int maxpart, CycleType& cur, std::vector<CycleType>& out) {
  if (rest == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(rest, maxpart); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(rest - part, part, cur, out);
    cur.pop_back();
  }
}

std::vector<CycleType> partitions(int n) {
  std::vector<CycleType> out;
  CycleType cur;
  partitions_rec(n, n, cur, out);
  return out;
}

Permutation representative(const CycleType& type, int n) {
  std::vector<int> im(n);
  int base = 0;
  for (int len : type) {
    for (int i = 0; i < len; ++i) im[base + i] = base + (i + 1) % len;
    base += len;
  }
  return Permutation(std::move(im));
}

real_t qpow(real_t q, int k) { return std::pow(q, static_cast<real_t>(k)); }

}  // namespace

MatrixXr gram_matrix(int n, real_t q) {
  if (n < 1 || n > 6) throw std::invalid_argument("gram_matrix needs 1 <= n <= 6");
  if (q < 1) throw std::domain_error("gram_matrix needs q >= 1");
  const auto perms = all_permutations(n);
  const int m = static_cast<int>(perms.size());
  MatrixXr g(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const auto rel = compose(perms[i], inverse(perms[j]));
      g(i, j) = qpow(q, cycle_stats(rel).num_cycles);
    }
  }
  return g;
}

WeingartenTable WeingartenTable::build(int n, real_t q) {
  if (n < 1) throw std::invalid_argument("WeingartenTable needs n >= 1");
  if (n > 7) throw std::invalid_argument("WeingartenTable limited to n <= 7");
  if (q < n) throw std::domain_error("WeingartenTable needs q >= n (invertible Gram)");

  // Collapse the Gram system onto class functions: the Weingarten function is
  // a class function and the Gram operator preserves that subspace, so the
  // p(n) x p(n) class-summed system has the same solution.
  const auto types = partitions(n);
  const int m = static_cast<int>(types.size());
  std::map<CycleType, int> type_index;
  for (int d = 0; d < m; ++d) type_index[types[d]] = d;

  MatrixXr a = MatrixXr::Zero(m, m);
  VectorXr b = VectorXr::Zero(m);
  PermutationStream stream(n);
  std::vector<Permutation> rep_inv;
  rep_inv.reserve(m);
  for (int c = 0; c < m; ++c) rep_inv.push_back(inverse(representative(types[c], n)));
  while (auto tau = stream.next()) {
    const int d = type_index.at(cycle_type(*tau));
    for (int c = 0; c < m; ++c)
      a(c, d) += qpow(q, cycle_stats(compose(rep_inv[c], *tau)).num_cycles);
  }
  const CycleType id_type(static_cast<size_t>(n), 1);
  b(type_index.at(id_type)) = 1;

  const VectorXr w = Eigen::FullPivLU<MatrixXr>(a).solve(b);

  WeingartenTable table;
  table.n_ = n;
  table.q_ = q;
  for (int d = 0; d < m; ++d) table.values_[types[d]] = w(d);
  return table;
}

real_t WeingartenTable::operator()(const Permutation& sigma) const {
  if (sigma.size() != n_) throw std::invalid_argument("permutation size mismatch");
  return by_type(cycle_type(sigma));
}

real_t WeingartenTable::by_type(const CycleType& type) const {
  auto it = values_.find(type);
  if (it == values_.end()) throw std::invalid_argument("unknown cycle type");
  return it->second;
}

real_t wg_exact(int n, real_t q, const Permutation& sigma) {
  static std::map<std::pair<int, real_t>, WeingartenTable> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(n, q);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, WeingartenTable::build(n, q)).first;
  return it->second(sigma);
}

real_t wg_leading(int n, real_t q, const Permutation& sigma) {
  if (sigma.size() != n) throw std::invalid_argument("permutation size mismatch");
  if (q <= 0) throw std::domain_error("wg_leading needs q > 0");
  const auto stats = cycle_stats(sigma);
  real_t coeff = 1;
  for (int len : stats.cycle_lengths) {
    coeff *= static_cast<real_t>(catalan(len - 1));
    if (len % 2 == 0) coeff = -coeff;
  }
  return coeff * qpow(q, -(n + stats.transposition_distance));
}

int term_order(const Permutation& sigma, const Permutation& tau) {
  if (sigma.size() != tau.size()) throw std::invalid_argument("size mismatch");
  const int n = sigma.size();
  const auto rel = compose(compose(tau, inverse(sigma)), canonical_pi(n));
  return cycle_stats(tau).num_cycles + cycle_stats(sigma).num_cycles - n -
         cycle_stats(rel).transposition_distance;
}

}  // namespace qhaar
