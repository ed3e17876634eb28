#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace qhaar {

// One multiplicative atom inside a trace word: a power of the averaged
// unitary (upow != 0) or a named fixed operator (upow == 0).
struct Atom {
  int upow = 0;
  std::string op;
  bool dagger = false;  // adjoint flag for fixed operators

  bool operator==(const Atom&) const = default;
};

Atom u_pow(int k);  // |k| <= 64, k != 0
Atom fixed_op(std::string name, bool dagger = false);

using TraceWord = std::vector<Atom>;

// prefactor * q^{qpow} * prod_w Tr(word_w); the unitary entering UPow atoms
// is the variable being Haar-averaged, fixed operators are bound by name.
struct MomentExpression {
  std::complex<double> prefactor{1.0, 0.0};
  int qpow = 0;
  std::vector<TraceWord> words;
  std::map<std::string, Eigen::MatrixXcd> operators;
};

struct UnitaryCount {
  int n_u = 0;     // unit factors of U after expanding powers
  int n_udag = 0;  // unit factors of U^{-1}
};
UnitaryCount unitary_count(const MomentExpression& expr);

// Complex conjugate of a trace word: reverse the order, invert the powers,
// adjoint the fixed operators.
TraceWord conjugated(const TraceWord& word);

// Merge adjacent unitary powers, cyclically (valid under a trace), dropping
// exact cancellations: [U^2, Z, U^-1, U^-1] -> [U^2, Z, U^-2].  The result
// may be empty (a fully cancelling power of U), whose trace is Tr(1) = q.
TraceWord merge_powers(const TraceWord& word);

// Text form "tr[ Z U Z U^-1 ] * tr[ U^2 U^-2 ]".  An optional leading scalar
// ("0.5 *", "3/4 *") and/or power of q ("q^-2 *") is accepted; a trailing
// apostrophe marks an adjointed operator ("Z'").  Operators are bound
// separately via MomentExpression::operators.
MomentExpression parse_expression(const std::string& text);
std::string to_string(const MomentExpression& expr);

// Numeric evaluation at a concrete unitary; powers of u are cached per call.
// Every referenced operator must be bound and match the dimension of u.
std::complex<double> evaluate_at(const MomentExpression& expr, const Eigen::MatrixXcd& u);

}  // namespace qhaar
