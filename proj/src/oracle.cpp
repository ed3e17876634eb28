#include "qhaar/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "qhaar/weingarten.hpp"

namespace qhaar {
namespace {

// Index wiring of an expression after removing the unitary factors.  U
// instances carry ids 0..n-1, U^{-1} instances n..2n-1, both in scan order.
// Segment i runs from the column side of instance i, through the fixed
// operators sitting between it and the next unitary factor of its word, to
// the row side of that factor.
struct Wiring {
  int n = 0;
  int q = 0;
  std::vector<int> seg_to;
  std::vector<int> seg_mat;  // index into mats, -1 for an operator-free segment
  std::vector<Eigen::MatrixXcd> mats;
  complex_t const_factor{1, 0};  // traces of unitary-free words
};

Eigen::MatrixXcd op_matrix(const MomentExpression& expr, const Atom& atom, int q) {
  auto it = expr.operators.find(atom.op);
  if (it == expr.operators.end()) throw std::invalid_argument("unbound operator: " + atom.op);
  if (it->second.rows() != q || it->second.cols() != q)
    throw std::invalid_argument("operator dimension mismatch: " + atom.op);
  return atom.dagger ? Eigen::MatrixXcd(it->second.adjoint()) : it->second;
}

Wiring build_wiring(const MomentExpression& expr, int q, int n) {
  Wiring w;
  w.n = n;
  w.q = q;
  w.seg_to.assign(2 * n, -1);
  w.seg_mat.assign(2 * n, -1);
  int next_u = 0, next_ud = 0;

  struct Item {
    int inst = -1;  // -1 for fixed operators
    int mat = -1;
  };
  std::vector<Eigen::MatrixXcd> word_mats;
  for (const auto& word : expr.words) {
    if (word.empty()) throw std::invalid_argument("empty trace word");
    std::vector<Item> items;
    word_mats.clear();
    for (const auto& atom : word) {
      if (atom.upow > 0) {
        for (int k = 0; k < atom.upow; ++k) items.push_back({next_u++, -1});
      } else if (atom.upow < 0) {
        for (int k = 0; k < -atom.upow; ++k) items.push_back({n + next_ud++, -1});
      } else {
        items.push_back({-1, static_cast<int>(word_mats.size())});
        word_mats.push_back(op_matrix(expr, atom, q));
      }
    }
    std::vector<int> upos;
    for (size_t i = 0; i < items.size(); ++i)
      if (items[i].inst >= 0) upos.push_back(static_cast<int>(i));

    if (upos.empty()) {
      Eigen::MatrixXcd acc = word_mats[items[0].mat];
      for (size_t i = 1; i < items.size(); ++i) acc = acc * word_mats[items[i].mat];
      w.const_factor *= complex_t(acc.trace());
      continue;
    }
    const int k = static_cast<int>(items.size());
    for (size_t j = 0; j < upos.size(); ++j) {
      const int p = upos[j];
      const int pn = upos[(j + 1) % upos.size()];
      const int inst = items[p].inst;
      w.seg_to[inst] = items[pn].inst;
      Eigen::MatrixXcd prod;
      bool have = false;
      for (int t = (p + 1) % k; t != pn; t = (t + 1) % k) {
        const auto& m = word_mats[items[t].mat];
        if (!have) {
          prod = m;
          have = true;
        } else {
          prod = prod * m;
        }
      }
      if (have) {
        w.seg_mat[inst] = static_cast<int>(w.mats.size());
        w.mats.push_back(std::move(prod));
      }
    }
  }
  return w;
}

struct Workspace {
  std::vector<char> visited;
  std::vector<int> key;
  std::vector<int> tau_inv;
  std::unordered_map<std::string, complex_t> memo;
  bool use_memo = true;
};

// Lexicographically minimal rotation; pins the evaluation order of each
// cyclic trace so memoized and fresh computations agree bit for bit.
void canonical_rotation(std::vector<int>& key) {
  const size_t k = key.size();
  if (k <= 1) return;
  size_t best = 0;
  for (size_t i = 1; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      const int a = key[(i + j) % k];
      const int b = key[(best + j) % k];
      if (a != b) {
        if (a < b) best = i;
        break;
      }
    }
  }
  std::rotate(key.begin(), key.begin() + best, key.end());
}

complex_t loop_trace(const Wiring& w, Workspace& ws) {
  canonical_rotation(ws.key);
  std::string memo_key;
  if (ws.use_memo) {
    memo_key.assign(reinterpret_cast<const char*>(ws.key.data()), ws.key.size() * sizeof(int));
    auto it = ws.memo.find(memo_key);
    if (it != ws.memo.end()) return it->second;
  }
  Eigen::MatrixXcd acc = w.mats[w.seg_mat[ws.key[0]]];
  for (size_t i = 1; i < ws.key.size(); ++i) acc = acc * w.mats[w.seg_mat[ws.key[i]]];
  const complex_t value{acc.trace()};
  if (ws.use_memo) ws.memo.emplace(std::move(memo_key), value);
  return value;
}

// Product over index loops for one (sigma, tau) pair.  Row sides of U join
// column sides of U^{-1} through sigma; row sides of U^{-1} join column sides
// of U through tau^{-1}.
complex_t term_value(const Wiring& w, const std::vector<int>& sigma,
                     const std::vector<int>& tau_inv, Workspace& ws) {
  const int m = 2 * w.n;
  ws.visited.assign(m, 0);
  complex_t prod{1, 0};
  for (int start = 0; start < m; ++start) {
    if (ws.visited[start]) continue;
    ws.key.clear();
    int cur = start;
    do {
      ws.visited[cur] = 1;
      if (w.seg_mat[cur] >= 0) ws.key.push_back(cur);
      const int y = w.seg_to[cur];
      cur = (y < w.n) ? (w.n + sigma[y]) : tau_inv[y - w.n];
    } while (cur != start);
    if (ws.key.empty())
      prod *= static_cast<long double>(w.q);
    else
      prod *= loop_trace(w, ws);
  }
  return prod;
}

ExactAverage prepare(const MomentExpression& expr, int q, Wiring& w, complex_t& scale,
                     bool& early) {
  if (q < 1) throw std::domain_error("q must be >= 1");
  const auto counts = unitary_count(expr);
  ExactAverage out;
  out.n_unitaries = std::max(counts.n_u, counts.n_udag);
  early = true;
  if (counts.n_u != counts.n_udag) return out;  // phase average vanishes exactly
  const int n = counts.n_u;
  if (n > 7) throw std::invalid_argument("more than 7 unitary pairs is unsupported");
  if (n > 0 && q < n) throw std::domain_error("q below the oracle minimum (q >= N)");
  w = build_wiring(expr, q, n);
  scale = complex_t(expr.prefactor) *
          std::pow(static_cast<long double>(q), static_cast<long double>(expr.qpow)) *
          w.const_factor;
  if (n == 0) {
    out.value = scale;
    out.term_count = 1;
    return out;
  }
  early = false;
  return out;
}

}  // namespace

ExactAverage haar_average(const MomentExpression& expr, int q) {
  Wiring w;
  complex_t scale;
  bool early = false;
  ExactAverage out = prepare(expr, q, w, scale, early);
  if (early) return out;

  const int n = out.n_unitaries;
  const auto table = WeingartenTable::build(n, static_cast<real_t>(q));
  const auto perms = all_permutations(n);
  const int fact = static_cast<int>(perms.size());
  std::vector<std::vector<int>> inv(fact);
  for (int i = 0; i < fact; ++i) inv[i] = inverse(perms[i]).images();

  std::vector<complex_t> partials(fact);
#pragma omp parallel
  {
    Workspace ws;
    ws.tau_inv.resize(n);
#pragma omp for schedule(dynamic, 8)
    for (int ai = 0; ai < fact; ++ai) {
      const real_t wg = table(perms[ai]);
      const auto& alpha_inv = inv[ai];
      complex_t acc{0, 0};
      for (int si = 0; si < fact; ++si) {
        const auto& sigma_inv = inv[si];
        for (int i = 0; i < n; ++i) ws.tau_inv[i] = sigma_inv[alpha_inv[i]];  // (alpha sigma)^{-1}
        acc += term_value(w, perms[si].images(), ws.tau_inv, ws);
      }
      partials[ai] = static_cast<complex_t>(wg) * acc;
    }
  }
  complex_t total{0, 0};
  for (const auto& p : partials) total += p;
  out.value = scale * total;
  out.term_count = static_cast<long long>(fact) * fact;
  return out;
}

ExactAverage haar_average_serial(const MomentExpression& expr, int q) {
  Wiring w;
  complex_t scale;
  bool early = false;
  ExactAverage out = prepare(expr, q, w, scale, early);
  if (early) return out;

  const int n = out.n_unitaries;
  const auto table = WeingartenTable::build(n, static_cast<real_t>(q));
  const auto perms = all_permutations(n);
  Workspace ws;
  ws.use_memo = false;
  complex_t total{0, 0};
  for (const auto& sigma : perms) {
    for (const auto& tau : perms) {
      const real_t wg = table(compose(tau, inverse(sigma)));
      ws.tau_inv = inverse(tau).images();
      total += static_cast<complex_t>(wg) * term_value(w, sigma.images(), ws.tau_inv, ws);
    }
  }
  out.value = scale * total;
  out.term_count = static_cast<long long>(perms.size()) * static_cast<long long>(perms.size());
  return out;
}

long double trace_power_moment(const std::vector<int>& a, const std::vector<int>& b, int q) {
  auto weight = [](const std::vector<int>& v) {
    long long s = 0;
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0) throw std::invalid_argument("negative multiplicity");
      s += static_cast<long long>(i + 1) * v[i];
    }
    return s;
  };
  const long long wa = weight(a), wb = weight(b);
  if (q < std::max(wa, wb))
    throw std::domain_error("trace_power_moment needs q >= max total power");
  auto trimmed = [](std::vector<int> v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
  };
  if (trimmed(a) != trimmed(b)) return 0;
  long double prod = 1;
  for (size_t i = 0; i < a.size(); ++i) {
    const long double m = static_cast<long double>(i + 1);
    for (int c = 1; c <= a[i]; ++c) prod *= m * c;  // m^{a_m} a_m!
  }
  return prod;
}

long double h_value(const Permutation& tau, long double q) {
  if (!is_even_cycle_only(tau)) return 0;
  return std::pow(q, static_cast<long double>(cycle_stats(tau).num_cycles));
}

}  // namespace qhaar
