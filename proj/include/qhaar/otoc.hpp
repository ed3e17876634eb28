#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qhaar/expr.hpp"
#include "qhaar/haar_mc.hpp"

namespace qhaar {

// One OTOC layer: operator insertions on the four legs of the cross-section.
// Legs "1" and "2" are the forward copies, "1b" and "2b" the conjugated
// copies (they carry the entrywise conjugate).  Absent legs are identities.
struct LayerSpec {
  std::map<std::string, std::string> insertions;  // leg -> operator id
};

using OperatorTable = std::map<std::string, Eigen::MatrixXcd>;

// overlap matrix of the two leg pairings: [[1, 1/q], [1/q, 1]]
Eigen::Matrix2d pair_gram(int q);

// Dual-basis projector onto span{|+>, |->}: maps the overlap vector
// (<+|psi>, <-|psi>) to the expansion coefficients of K|psi>.  Numerically
// the inverse Gram matrix; on vectors already in the span it acts as the
// identity (K^2 = K).
Eigen::Matrix2d projector_k(int q);

// Matrix elements <a|Gamma|b> of one insertion layer in the pair basis:
// |+> pairs legs (1,1b)(2,2b), |-> pairs (1,2b)(2,1b); each element is
// (1/q^2) times the product over closed leg loops of the loop trace.
Eigen::Matrix2cd layer_matrix(const LayerSpec& layer, int q, const OperatorTable& ops);

// parse "1,1b;2,2b": semicolon-separated layers, comma-separated leg lists,
// an empty segment is an insertion-free layer, every listed leg gets operator
// id "Z"; empty/blank text means no layers (T = 1)
std::vector<LayerSpec> parse_layers(const std::string& text);

// Leading-order OTOC: q <Z_+| K G(1) K ... K G(T-1) K |Z(T)_->, evaluated
// entirely in the two-dimensional pair space (T = layers.size() + 1).
// ops must bind "Z" (the correlator operator) plus any layer insertion ids.
std::complex<double> theorem4_value(const std::vector<LayerSpec>& layers, int q,
                                    const OperatorTable& ops);

// The two ladder sums over the split point between +-type and --type rungs,
// returned separately as (plus, minus); plus - minus reproduces
// theorem4_value up to O(1/q^3).
std::pair<std::complex<double>, std::complex<double>> otoc_plus_minus(
    const std::vector<LayerSpec>& layers, int q, const OperatorTable& ops);

// full OTOC trace word (1/q)Tr(Z A Z(T) B Z C Z(T) D) with the leg
// insertions expanded at their times; Z unbound ("Z"), shared by the exact
// and MC paths
MomentExpression otoc_expression(const std::vector<LayerSpec>& layers);

// exact Haar average of the full word through the oracle; needs 2T <= 6
std::complex<double> otoc_exact(const std::vector<LayerSpec>& layers, int q,
                                const OperatorTable& ops);

// direct simulation of the same word
HaarEstimate otoc_mc(const std::vector<LayerSpec>& layers, int q, long long n_samples,
                     std::uint64_t seed, const OperatorTable& ops);

}  // namespace qhaar
