#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <complex>

#include "qhaar/oracle.hpp"
#include "qhaar/perm.hpp"

using namespace qhaar;

namespace {

Eigen::MatrixXcd diag_sign(int q) {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(q, q);
  for (int i = 0; i < q; ++i) z(i, i) = (i < q / 2) ? 1.0 : -1.0;
  return z;
}

Eigen::MatrixXcd pseudo_random(int q, unsigned salt) {
  Eigen::MatrixXcd m(q, q);
  unsigned s = salt * 2654435761u + 12345u;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      s = s * 1664525u + 1013904223u;
      double re = (s >> 8) / double(1u << 24) - 0.5;
      s = s * 1664525u + 1013904223u;
      double im = (s >> 8) / double(1u << 24) - 0.5;
      m(i, j) = {re, im};
    }
  return m;
}

// prod_m Tr(U^m)^{a_m} * prod_m Tr(U^-m)^{b_m} as a moment expression
MomentExpression trace_power_expr(const std::vector<int>& a, const std::vector<int>& b) {
  MomentExpression expr;
  for (size_t i = 0; i < a.size(); ++i)
    for (int c = 0; c < a[i]; ++c) expr.words.push_back({u_pow(static_cast<int>(i) + 1)});
  for (size_t i = 0; i < b.size(); ++i)
    for (int c = 0; c < b[i]; ++c) expr.words.push_back({u_pow(-static_cast<int>(i) - 1)});
  return expr;
}

long double rel_err(complex_t got, long double want) {
  const long double scale = std::max<long double>(std::abs(want), 1.0L);
  return std::abs(got - complex_t(want, 0)) / scale;
}

}  // namespace

TEST_CASE("unbalanced unitary counts average to exactly zero") {
  for (const char* text : {"tr[ U ]", "tr[ Z U Z U ]", "tr[ U ] * tr[ U ] * tr[ U^-1 ]"}) {
    auto expr = parse_expression(text);
    expr.operators["Z"] = diag_sign(4);
    auto avg = haar_average(expr, 4);
    CHECK(avg.value == complex_t(0, 0));
    CHECK(avg.term_count == 0);
  }
}

TEST_CASE("expressions without unitaries pass through") {
  auto expr = parse_expression("q^-1 * tr[ Z Z ]");
  expr.operators["Z"] = diag_sign(6);
  auto avg = haar_average(expr, 6);
  CHECK(avg.n_unitaries == 0);
  CHECK(avg.term_count == 1);
  CHECK(rel_err(avg.value, 1.0L) < 1e-15);
}

TEST_CASE("single-pair averages match the rank-one projector") {
  // int Tr(U) Tr(U^-1) dU = 1
  auto tt = haar_average(parse_expression("tr[ U ] * tr[ U^-1 ]"), 5);
  CHECK(tt.n_unitaries == 1);
  CHECK(tt.term_count == 1);
  CHECK(rel_err(tt.value, 1.0L) < 1e-15);

  // int Tr(A U B U^-1) dU = Tr(A) Tr(B) / q
  const int q = 6;
  auto expr = parse_expression("tr[ A U B U^-1 ]");
  expr.operators["A"] = pseudo_random(q, 1);
  expr.operators["B"] = pseudo_random(q, 2);
  const auto want =
      complex_t(expr.operators["A"].trace()) * complex_t(expr.operators["B"].trace()) /
      static_cast<long double>(q);
  auto avg = haar_average(expr, q);
  CHECK(std::abs(avg.value - want) < 1e-14);

  // int Tr(A U) Tr(U^-1 B) dU = Tr(A B) / q
  auto expr2 = parse_expression("tr[ A U ] * tr[ U^-1 B ]");
  expr2.operators = expr.operators;
  const auto want2 =
      complex_t((expr.operators["A"] * expr.operators["B"]).trace()) / static_cast<long double>(q);
  auto avg2 = haar_average(expr2, q);
  CHECK(std::abs(avg2.value - want2) < 1e-14);

  // traceless conjugation average vanishes
  auto expr3 = parse_expression("q^-1 * tr[ Z U Z U^-1 ]");
  expr3.operators["Z"] = diag_sign(q);
  CHECK(std::abs(haar_average(expr3, q).value) < 1e-16);
}

TEST_CASE("four-point conjugation average hits the closed form") {
  // (1/q) int Tr(Z U Z U^-1 Z U Z U^-1) dU = -1/(q^2-1) for traceless Z, Z^2 = 1
  for (int q : {4, 8}) {
    auto expr = parse_expression("q^-1 * tr[ Z U Z U^-1 Z U Z U^-1 ]");
    expr.operators["Z"] = diag_sign(q);
    const long double want = -1.0L / (static_cast<long double>(q) * q - 1.0L);
    auto avg = haar_average(expr, q);
    CHECK(avg.n_unitaries == 2);
    CHECK(avg.term_count == 4);
    CHECK(rel_err(avg.value, want) < 1e-12);
    CHECK(std::abs(avg.value.imag()) < 1e-18);
    auto ser = haar_average_serial(expr, q);
    CHECK(rel_err(ser.value, want) < 1e-12);
  }
}

TEST_CASE("trace power moments match the product formula up to weight three") {
  const std::vector<std::vector<int>> multis = {{}, {1}, {2}, {0, 1}, {3}, {1, 1}, {0, 0, 1}};
  for (int q : {4, 6}) {
    for (const auto& a : multis) {
      for (const auto& b : multis) {
        const long double want = trace_power_moment(a, b, q);
        auto avg = haar_average(trace_power_expr(a, b), q);
        INFO("q=", q, " a=", a.size(), " b=", b.size());
        CHECK(rel_err(avg.value, want) < 1e-13);
      }
    }
  }
}

TEST_CASE("higher trace power moments are dimension independent") {
  // weight 4: int |Tr(U)^2 Tr(U^2)|^2 = 2! * 2 = 4
  auto e4 = trace_power_expr({2, 1}, {2, 1});
  CHECK(rel_err(haar_average(e4, 5).value, 4.0L) < 1e-12);
  // weight 5: int |Tr(U) Tr(U^2)^2|^2 = 1 * (2^2 2!) = 8
  auto e5 = trace_power_expr({1, 2}, {1, 2});
  CHECK(rel_err(haar_average(e5, 6).value, 8.0L) < 1e-12);
  // weight 6: int |Tr(U^2)^3|^2 = 2^3 3! = 48
  auto e6 = trace_power_expr({0, 3}, {0, 3});
  CHECK(rel_err(haar_average(e6, 7).value, 48.0L) < 1e-11);
}

TEST_CASE("parallel kernel agrees with the serial reference on operator words") {
  const int q = 5;
  auto expr = parse_expression("tr[ A U B U^-1 C U^2 D U^-2 ]");
  expr.operators["A"] = pseudo_random(q, 3);
  expr.operators["B"] = pseudo_random(q, 4);
  expr.operators["C"] = pseudo_random(q, 5);
  expr.operators["D"] = pseudo_random(q, 6);
  auto par = haar_average(expr, q);
  auto ser = haar_average_serial(expr, q);
  CHECK(par.n_unitaries == 3);
  CHECK(par.term_count == 36);
  CHECK(ser.term_count == 36);
  CHECK(std::abs(par.value - ser.value) <= 1e-14 * std::max<long double>(std::abs(ser.value), 1));
}

TEST_CASE("results are bit-identical across thread counts") {
  const int q = 6;
  auto expr = parse_expression("q^-1 * tr[ Z U Z U^-1 Z U Z U^-1 Z U Z U^-1 ]");
  expr.operators["Z"] = diag_sign(q);

  omp_set_dynamic(0);
  omp_set_num_threads(1);
  auto one = haar_average(expr, q);
  omp_set_num_threads(4);
  auto four = haar_average(expr, q);
  omp_set_num_threads(omp_get_num_procs());

  // exact equality: per-alpha partials are reduced in enumeration order
  CHECK(one.value.real() == four.value.real());
  CHECK(one.value.imag() == four.value.imag());
}

TEST_CASE("oracle rejects out-of-range inputs") {
  auto expr = trace_power_expr({3}, {3});
  CHECK_THROWS_AS(haar_average(expr, 2), std::domain_error);
  CHECK_THROWS_AS(haar_average(expr, 0), std::domain_error);
  auto big = trace_power_expr({0, 0, 0, 8}, {0, 0, 0, 8});
  CHECK_THROWS_AS(haar_average(big, 40), std::invalid_argument);
  auto unbound = parse_expression("tr[ W U W U^-1 ]");
  CHECK_THROWS_AS(haar_average(unbound, 4), std::invalid_argument);
}

TEST_CASE("trace_power_moment handles trailing zeros and domain limits") {
  CHECK(trace_power_moment({1, 0, 0}, {1}, 4) == 1.0L);
  CHECK(trace_power_moment({}, {}, 1) == 1.0L);
  CHECK(trace_power_moment({0, 1}, {2}, 4) == 0.0L);
  CHECK(trace_power_moment({0, 2}, {0, 2}, 4) == 8.0L);
  CHECK_THROWS_AS(trace_power_moment({3}, {3}, 2), std::domain_error);
  CHECK_THROWS_AS(trace_power_moment({-1}, {1}, 4), std::invalid_argument);
}

TEST_CASE("h_value keeps only permutations with all cycles even") {
  CHECK(h_value(parse_cycles("(1 2)(3 4)", 4), 3.0L) == 9.0L);
  CHECK(h_value(parse_cycles("(1 2)", 2), 5.0L) == 5.0L);
  CHECK(h_value(parse_cycles("(1 2 3)", 3), 5.0L) == 0.0L);
  CHECK(h_value(Permutation::identity(2), 5.0L) == 0.0L);
  CHECK(h_value(parse_cycles("(1 2 3 4)", 4), 2.0L) == 2.0L);
}
