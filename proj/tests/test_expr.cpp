#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "qhaar/expr.hpp"

using namespace qhaar;

namespace {

Eigen::MatrixXcd diag_sign(int q) {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(q, q);
  for (int i = 0; i < q; ++i) z(i, i) = (i < q / 2) ? 1.0 : -1.0;
  return z;
}

Eigen::MatrixXcd diag_phases(int q) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(q, q);
  for (int i = 0; i < q; ++i) u(i, i) = std::polar(1.0, 0.7 * (i + 1));
  return u;
}

}  // namespace

TEST_CASE("atom constructors validate their arguments") {
  CHECK_THROWS_AS(u_pow(0), std::invalid_argument);
  CHECK_THROWS_AS(u_pow(65), std::invalid_argument);
  CHECK_THROWS_AS(u_pow(-65), std::invalid_argument);
  CHECK(u_pow(-64).upow == -64);
  CHECK_THROWS_AS(fixed_op(""), std::invalid_argument);
  CHECK(fixed_op("Z", true).dagger);
}

TEST_CASE("unitary_count expands powers") {
  auto expr = parse_expression("tr[ U^3 Z U^-1 ] * tr[ U^-2 ]");
  auto c = unitary_count(expr);
  CHECK(c.n_u == 3);
  CHECK(c.n_udag == 3);
}

TEST_CASE("conjugated reverses, inverts powers, and adjoints operators") {
  TraceWord w{fixed_op("A"), u_pow(2), fixed_op("B", true), u_pow(-1)};
  TraceWord c = conjugated(w);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == u_pow(1));
  CHECK(c[1] == fixed_op("B", false));
  CHECK(c[2] == u_pow(-2));
  CHECK(c[3] == fixed_op("A", true));
  CHECK(conjugated(c) == w);
}

TEST_CASE("parser handles scalars, powers of q, adjoints, and multiple words") {
  auto expr = parse_expression("3/4 * q^-2 * tr[ Z U Z' U^-1 ] * tr[ U^2 ]");
  CHECK(expr.prefactor == std::complex<double>(0.75, 0.0));
  CHECK(expr.qpow == -2);
  REQUIRE(expr.words.size() == 2);
  REQUIRE(expr.words[0].size() == 4);
  CHECK(expr.words[0][0] == fixed_op("Z"));
  CHECK(expr.words[0][1] == u_pow(1));
  CHECK(expr.words[0][2] == fixed_op("Z", true));
  CHECK(expr.words[0][3] == u_pow(-1));
  CHECK(expr.words[1] == TraceWord{u_pow(2)});
}

TEST_CASE("printer output parses back to the same expression") {
  for (const char* text : {"tr[ U U^-1 ]", "0.5 * tr[ Z U Z U^-1 Z U Z U^-1 ]",
                           "q^3 * tr[ A B' ] * tr[ U^-4 Z U^4 ]"}) {
    auto expr = parse_expression(text);
    auto again = parse_expression(to_string(expr));
    CHECK(again.prefactor == expr.prefactor);
    CHECK(again.qpow == expr.qpow);
    CHECK(again.words == expr.words);
  }
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_expression(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_expression("tr[ ]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expression("tr[ Z"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expression("tr[ Z ] tr[ Z ]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expression("tr[ Z ] * 2 * tr[ Z ]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expression("q^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expression("2 *"), std::invalid_argument);
}

TEST_CASE("evaluate_at matches hand values at concrete unitaries") {
  const int q = 4;
  auto expr = parse_expression("q^-1 * tr[ Z U Z U^-1 ]");
  expr.operators["Z"] = diag_sign(q);

  // at U = 1 the word collapses to Tr(Z^2)/q = 1
  auto at_id = evaluate_at(expr, Eigen::MatrixXcd::Identity(q, q));
  CHECK(std::abs(at_id - std::complex<double>(1.0, 0.0)) < 1e-14);

  // at a diagonal unitary, Z and U commute, so the same collapse happens
  auto at_diag = evaluate_at(expr, diag_phases(q));
  CHECK(std::abs(at_diag - std::complex<double>(1.0, 0.0)) < 1e-14);
}

TEST_CASE("evaluate_at power cache is consistent across mixed powers") {
  const int q = 5;
  auto expr = parse_expression("tr[ U^3 U^-2 U^-1 ]");
  auto value = evaluate_at(expr, diag_phases(q));
  CHECK(std::abs(value - std::complex<double>(q, 0.0)) < 1e-12);
}

TEST_CASE("evaluate_at rejects unbound or mismatched operators") {
  const int q = 3;
  auto expr = parse_expression("tr[ W U W U^-1 ]");
  CHECK_THROWS_AS(evaluate_at(expr, Eigen::MatrixXcd::Identity(q, q)), std::invalid_argument);
  expr.operators["W"] = Eigen::MatrixXcd::Identity(q + 1, q + 1);
  CHECK_THROWS_AS(evaluate_at(expr, Eigen::MatrixXcd::Identity(q, q)), std::invalid_argument);
}
