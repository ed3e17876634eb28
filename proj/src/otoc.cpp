#include "qhaar/otoc.hpp"

#include <array>
#include <stdexcept>

#include "qhaar/oracle.hpp"

namespace qhaar {
namespace {

constexpr std::array<const char*, 4> kLegNames = {"1", "1b", "2", "2b"};

// pairing partners in leg order 1, 1b, 2, 2b
constexpr std::array<int, 4> kPairPlus = {1, 0, 3, 2};   // (1,1b)(2,2b)
constexpr std::array<int, 4> kPairMinus = {3, 2, 1, 0};  // (1,2b)(2,1b)

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

Eigen::Matrix2d pair_gram(int q) {
  if (q < 2) throw std::domain_error("pair space needs q >= 2");
  Eigen::Matrix2d g;
  const double r = 1.0 / q;
  g << 1.0, r, r, 1.0;
  return g;
}

Eigen::Matrix2d projector_k(int q) {
  if (q < 2) throw std::domain_error("pair space needs q >= 2");
  const double r = 1.0 / q;
  const double scale = 1.0 / (1.0 - r * r);
  Eigen::Matrix2d k;
  k << scale, -scale * r, -scale * r, scale;
  return k;
}

Eigen::Matrix2cd layer_matrix(const LayerSpec& layer, int q, const OperatorTable& ops) {
  if (q < 2) throw std::domain_error("pair space needs q >= 2");
  for (const auto& [leg, id] : layer.insertions) {
    if (leg != "1" && leg != "1b" && leg != "2" && leg != "2b")
      throw std::invalid_argument("unknown leg '" + leg + "'");
  }
  // Walk matrices: up legs (1, 2) enter their loop transposed, barred legs
  // (1b, 2b) carry the entrywise conjugate of the bound operator.
  std::array<Eigen::MatrixXcd, 4> mat;
  for (int l = 0; l < 4; ++l) {
    const auto it = layer.insertions.find(kLegNames[l]);
    if (it == layer.insertions.end()) {
      mat[l] = Eigen::MatrixXcd::Identity(q, q);
      continue;
    }
    const auto op = ops.find(it->second);
    if (op == ops.end())
      throw std::invalid_argument("operator '" + it->second + "' is not bound");
    if (op->second.rows() != q || op->second.cols() != q)
      throw std::invalid_argument("operator '" + it->second + "' does not match dimension q");
    if (l % 2 == 0)
      mat[l] = op->second.transpose();
    else
      mat[l] = op->second.conjugate();
  }

  Eigen::Matrix2cd out;
  for (int a = 0; a < 2; ++a) {    // bra pairing (top)
    for (int b = 0; b < 2; ++b) {  // ket pairing (bottom)
      const auto& top = (a == 0) ? kPairPlus : kPairMinus;
      const auto& bottom = (b == 0) ? kPairPlus : kPairMinus;
      std::array<bool, 4> visited = {false, false, false, false};
      std::complex<double> product = 1.0;
      for (int start : {0, 2}) {
        if (visited[start]) continue;
        visited[start] = true;
        Eigen::MatrixXcd acc = mat[start];
        int down = top[start];
        while (true) {
          visited[down] = true;
          acc = acc * mat[down];
          const int up = bottom[down];
          if (up == start) break;
          visited[up] = true;
          acc = acc * mat[up];
          down = top[up];
        }
        product *= acc.trace();
      }
      out(a, b) = product / static_cast<double>(q) / static_cast<double>(q);
    }
  }
  return out;
}

std::vector<LayerSpec> parse_layers(const std::string& text) {
  std::vector<LayerSpec> layers;
  if (trimmed(text).empty()) return layers;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(';', pos);
    const std::string segment =
        text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    LayerSpec layer;
    if (!trimmed(segment).empty()) {
      std::size_t lp = 0;
      while (lp <= segment.size()) {
        const auto comma = segment.find(',', lp);
        const std::string token = trimmed(
            segment.substr(lp, comma == std::string::npos ? std::string::npos : comma - lp));
        if (token != "1" && token != "1b" && token != "2" && token != "2b")
          throw std::invalid_argument("unknown leg '" + token + "' in layer list");
        if (!layer.insertions.emplace(token, "Z").second)
          throw std::invalid_argument("leg '" + token + "' listed twice in one layer");
        if (comma == std::string::npos) break;
        lp = comma + 1;
      }
    }
    layers.push_back(std::move(layer));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return layers;
}

std::complex<double> theorem4_value(const std::vector<LayerSpec>& layers, int q,
                                    const OperatorTable& ops) {
  const int big_t = static_cast<int>(layers.size()) + 1;
  // boundary cross-sections: Z inserted on the forward legs of both copies
  LayerSpec boundary;
  boundary.insertions = {{"1", "Z"}, {"2", "Z"}};
  const Eigen::Matrix2cd b = layer_matrix(boundary, q, ops);
  const Eigen::Matrix2cd k = projector_k(q).cast<std::complex<double>>();

  // coefficients of K |Z(T)_-> in the pair basis, then pull one layer and one
  // projector through per time step, ending against <Z_+|
  Eigen::Vector2cd c = k * Eigen::Vector2cd(b(0, 1), b(1, 1));
  for (int t = big_t - 1; t >= 1; --t)
    c = k * (layer_matrix(layers[static_cast<std::size_t>(t) - 1], q, ops) * c);
  return static_cast<double>(q) * (b(0, 0) * c(0) + b(0, 1) * c(1));
}

std::pair<std::complex<double>, std::complex<double>> otoc_plus_minus(
    const std::vector<LayerSpec>& layers, int q, const OperatorTable& ops) {
  const int big_t = static_cast<int>(layers.size()) + 1;
  std::vector<Eigen::Matrix2cd> gamma;
  gamma.reserve(layers.size());
  for (const auto& layer : layers) gamma.push_back(layer_matrix(layer, q, ops));

  // pre[m] = prod_{t<=m} <+|G(t)|+>,  suf[m] = prod_{t>=m} <-|G(t)|->
  std::vector<std::complex<double>> pre(static_cast<std::size_t>(big_t), 1.0);
  std::vector<std::complex<double>> suf(static_cast<std::size_t>(big_t) + 1, 1.0);
  for (int m = 1; m < big_t; ++m) pre[m] = pre[m - 1] * gamma[m - 1](0, 0);
  for (int m = big_t - 1; m >= 1; --m) suf[m] = gamma[m - 1](1, 1) * suf[m + 1];

  const double qd = static_cast<double>(q);
  std::complex<double> plus = 0.0;
  for (int m = 1; m < big_t; ++m)
    plus += pre[m - 1] * (qd * gamma[m - 1](0, 1)) * suf[m + 1];
  std::complex<double> minus = 0.0;
  for (int m = 0; m < big_t; ++m) minus += pre[m] * suf[m + 1];
  return {plus / (qd * qd), minus / (qd * qd)};
}

MomentExpression otoc_expression(const std::vector<LayerSpec>& layers) {
  const int big_t = static_cast<int>(layers.size()) + 1;
  MomentExpression expr;
  expr.qpow = -1;
  TraceWord word;
  const auto heisenberg = [&word](int time, const std::string& id, bool dagger) {
    if (time != 0) word.push_back(u_pow(time));
    word.push_back(fixed_op(id, dagger));
    if (time != 0) word.push_back(u_pow(-time));
  };
  // insertions on a forward leg run toward the turning point, on a barred leg
  // back from it, each as the Heisenberg operator U^t Op U^-t (daggered on
  // the barred copies)
  const auto leg_run = [&](const char* leg, bool ascending, bool dagger) {
    for (int j = 1; j < big_t; ++j) {
      const int t = ascending ? j : big_t - j;
      const auto it = layers[static_cast<std::size_t>(t) - 1].insertions.find(leg);
      if (it != layers[static_cast<std::size_t>(t) - 1].insertions.end())
        heisenberg(t, it->second, dagger);
    }
  };
  word.push_back(fixed_op("Z"));
  leg_run("1", true, false);
  heisenberg(big_t, "Z", false);
  leg_run("1b", false, true);
  word.push_back(fixed_op("Z"));
  leg_run("2", true, false);
  heisenberg(big_t, "Z", false);
  leg_run("2b", false, true);
  expr.words.push_back(merge_powers(word));
  return expr;
}

namespace {

MomentExpression bound_expression(const std::vector<LayerSpec>& layers,
                                  const OperatorTable& ops) {
  MomentExpression expr = otoc_expression(layers);
  for (const auto& word : expr.words)
    for (const auto& atom : word)
      if (atom.upow == 0) {
        const auto it = ops.find(atom.op);
        if (it == ops.end())
          throw std::invalid_argument("operator '" + atom.op + "' is not bound");
        expr.operators[atom.op] = it->second;
      }
  return expr;
}

}  // namespace

std::complex<double> otoc_exact(const std::vector<LayerSpec>& layers, int q,
                                const OperatorTable& ops) {
  if (layers.size() > 2)
    throw std::invalid_argument("exact OTOC averaging supports at most two layers (2T <= 6)");
  const MomentExpression expr = bound_expression(layers, ops);
  const complex_t value = haar_average(expr, q).value;
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

HaarEstimate otoc_mc(const std::vector<LayerSpec>& layers, int q, long long n_samples,
                     std::uint64_t seed, const OperatorTable& ops) {
  return estimate(bound_expression(layers, ops), q, n_samples, seed);
}

}  // namespace qhaar
