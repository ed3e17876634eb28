#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "qhaar/perm.hpp"

using namespace qhaar;

TEST_CASE("compose and inverse") {
  Permutation p({1, 2, 0});  // 0->1->2->0
  Permutation r({0, 2, 1});
  CHECK(compose(p, r).images() == std::vector<int>{1, 0, 2});
  CHECK(compose(r, p).images() == std::vector<int>{2, 1, 0});
  CHECK(compose(p, inverse(p)) == Permutation::identity(3));
  CHECK(compose(inverse(p), p) == Permutation::identity(3));
  CHECK_THROWS_AS(compose(p, Permutation::identity(4)), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), std::invalid_argument);
}

TEST_CASE("cycle stats") {
  auto p = parse_cycles("(1 2)(3 4)", 5);
  auto s = cycle_stats(p);
  CHECK(s.cycle_lengths == std::vector<int>{2, 2, 1});
  CHECK(s.num_cycles == 3);
  CHECK(s.transposition_distance == 2);
  CHECK(s.parity == +1);

  auto id = Permutation::identity(4);
  CHECK(cycle_stats(id).num_cycles == 4);
  CHECK(cycle_stats(id).parity == +1);
}

TEST_CASE("parity is a homomorphism on S_4") {
  const auto perms = all_permutations(4);
  for (const auto& p : perms)
    for (const auto& r : perms)
      CHECK(cycle_stats(compose(p, r)).parity == cycle_stats(p).parity * cycle_stats(r).parity);
}

TEST_CASE("parity matches the product over cycle lengths") {
  for (const auto& p : all_permutations(6)) {
    int prod = 1;
    for (int len : cycle_type(p))
      if (len % 2 == 0) prod = -prod;
    CHECK(cycle_stats(p).parity == prod);
  }
}

TEST_CASE("even-cycle-only detection") {
  CHECK(is_even_cycle_only(parse_cycles("(1 2)", 2)));
  CHECK(is_even_cycle_only(parse_cycles("(1 2)(3 4)", 4)));
  CHECK(is_even_cycle_only(parse_cycles("(1 2 3 4)", 4)));
  CHECK_FALSE(is_even_cycle_only(Permutation::identity(2)));
  CHECK_FALSE(is_even_cycle_only(parse_cycles("(1 2 3)", 3)));
  CHECK_FALSE(is_even_cycle_only(parse_cycles("(1 2)", 3)));  // fixed point 3

  // An all-even cycle type forces even n and fixes the parity.
  for (const auto& p : all_permutations(6)) {
    if (!is_even_cycle_only(p)) continue;
    int n_from_type = 0;
    for (int len : cycle_type(p)) n_from_type += len;
    CHECK(n_from_type % 2 == 0);
    CHECK(cycle_stats(p).parity == ((6 - cycle_stats(p).num_cycles) % 2 ? -1 : +1));
  }
}

TEST_CASE("catalan numbers") {
  const long long expect[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862};
  for (int k = 0; k < 10; ++k) CHECK(catalan(k) == expect[k]);
  CHECK(catalan(35) == 3116285494907301262LL);
  CHECK_THROWS_AS(catalan(36), std::overflow_error);
  CHECK_THROWS_AS(catalan(-1), std::invalid_argument);
}

TEST_CASE("lexicographic enumeration") {
  auto perms = all_permutations(3);
  REQUIRE(perms.size() == 6);
  CHECK(perms.front() == Permutation::identity(3));
  CHECK(perms[1].images() == std::vector<int>{0, 2, 1});
  CHECK(perms.back().images() == std::vector<int>{2, 1, 0});
  CHECK(std::is_sorted(perms.begin(), perms.end()));
  CHECK_THROWS_AS(all_permutations(9), std::invalid_argument);
}

TEST_CASE("permutation stream is restartable and independent") {
  PermutationStream s1(3), s2(3);
  std::vector<Permutation> a, b;
  while (auto p = s1.next()) a.push_back(*p);
  (void)s2.next();  // advancing one stream must not affect a fresh drain
  s2.reset();
  while (auto p = s2.next()) b.push_back(*p);
  CHECK(a == b);
  CHECK(a == all_permutations(3));
  s1.reset();
  CHECK(s1.next() == Permutation::identity(3));
}

TEST_CASE("canonical cyclic shift permutation") {
  auto pi = canonical_pi(4);
  CHECK(pi.images() == std::vector<int>{1, 2, 3, 0});
  CHECK(cycle_stats(pi).num_cycles == 1);
  for (int n = 1; n <= 7; ++n) {
    auto s = cycle_stats(canonical_pi(n));
    CHECK(s.parity == ((n - 1) % 2 ? -1 : +1));
    CHECK(s.cycle_lengths == std::vector<int>{n});
  }
}

TEST_CASE("cycle notation round trip") {
  auto p = parse_cycles("(1 2)(3 4)", 5);
  CHECK(p.images() == std::vector<int>{1, 0, 3, 2, 4});
  CHECK(to_cycle_string(p) == "(1 2)(3 4)");
  CHECK(parse_cycles(to_cycle_string(p), 5) == p);
  CHECK(to_cycle_string(Permutation::identity(3)) == "()");
  CHECK(parse_cycles("", 3) == Permutation::identity(3));
  CHECK(parse_cycles("(2 3 1)", 3) == parse_cycles("(1 2 3)", 3));

  CHECK_THROWS_AS(parse_cycles("(1 5)", 4), std::invalid_argument);
  CHECK_THROWS_AS(parse_cycles("(1 1)", 4), std::invalid_argument);
  CHECK_THROWS_AS(parse_cycles("1 2)", 4), std::invalid_argument);
  CHECK_THROWS_AS(parse_cycles("(1 2", 4), std::invalid_argument);
}
