#pragma once

#include <Eigen/Dense>

#include <map>

#include "qhaar/perm.hpp"

namespace qhaar {

// Extended-precision scalar used for Weingarten values and moment sums.
using real_t = long double;
using MatrixXr = Eigen::Matrix<real_t, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXr = Eigen::Matrix<real_t, Eigen::Dynamic, 1>;

// Gram matrix of S_n in the q-dimensional defining representation: entry
// (i, j) = q^{num_cycles(p_i p_j^{-1})} over the lexicographic enumeration of
// S_n.  n <= 6 (the matrix is n! x n!).
MatrixXr gram_matrix(int n, real_t q);

// Exact unitary Weingarten values at fixed (n, q), obtained by solving the
// Gram linear system on the class-function subspace and cached per cycle
// type.  Valid for q >= n, where the Gram matrix is invertible.
class WeingartenTable {
public:
  static WeingartenTable build(int n, real_t q);
  real_t operator()(const Permutation& sigma) const;
  real_t by_type(const CycleType& type) const;
  int n() const { return n_; }
  real_t q() const { return q_; }

private:
  int n_ = 0;
  real_t q_ = 0;
  std::map<CycleType, real_t> values_;
};

// Wg(q, sigma) for sigma in S_n; solves (and caches) the (n, q) table.
real_t wg_exact(int n, real_t q, const Permutation& sigma);

// Leading asymptotic term: q^{-(n+|sigma|)} prod_c (-1)^{|c|-1} Cat_{|c|-1}
// over the cycles of sigma; the remainder is O(q^{-(n+|sigma|+2)}).
real_t wg_leading(int n, real_t q, const Permutation& sigma);

// 1/q order of the (sigma, tau) term in the two-sided moment sum:
// r = |C_tau| + |C_sigma| - n - |tau sigma^{-1} pi| with pi = canonical_pi(n).
int term_order(const Permutation& sigma, const Permutation& tau);

}  // namespace qhaar
