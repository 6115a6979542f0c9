#include <set>

#include "doctest.h"
#include "dedekind/arith.hpp"
#include "dedekind/errors.hpp"
#include "dedekind/field.hpp"
#include "dedekind/poly_mod_p.hpp"
#include "support.hpp"

using namespace dedekind;

TEST_CASE("parse_field_spec") {
  SUBCASE("rational field") {
    const auto f = parse_field_spec("min_poly: [0, 1]");
    CHECK(f.degree() == 1);
  }
  SUBCASE("gaussian field") {
    const auto f = parse_field_spec("min_poly: [1, 0, 1]");
    CHECK(f.degree() == 2);
    CHECK(f.quadratic_discriminant() == -4);
  }
  SUBCASE("r1 + 2 r2 must equal the degree") {
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 1]\ninvariants: {r1: 2}"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 1]\ninvariants: {r1: 1, r2: 1}"), ConfigError);
  }
  SUBCASE("missing r2 is derived from r1") {
    const auto f = parse_field_spec("min_poly: [1, 0, 1]\ninvariants: {r1: 0}");
    CHECK(*f.invariants().r2 == 1);
  }
  SUBCASE("non-monic and reducible polynomials are rejected") {
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [-4, 0, 1]"), ConfigError);      // (x-2)(x+2)
    CHECK_THROWS_AS(parse_field_spec("min_poly: [-8, 0, 0, 1]"), ConfigError);   // root 2
    CHECK_THROWS_AS(parse_field_spec("min_poly: [0, 0, 1]"), ConfigError);       // x^2
    CHECK_THROWS_AS(parse_field_spec("min_poly: [6, -5, 1]"), ConfigError);      // (x-2)(x-3)
  }
  SUBCASE("irreducible higher-degree polynomials are accepted") {
    CHECK_NOTHROW(parse_field_spec("min_poly: [-2, 0, 0, 1]"));
    CHECK_NOTHROW(parse_field_spec("min_poly: [1, 1, 1, 1, 1]"));  // 5th cyclotomic
    CHECK_NOTHROW(parse_field_spec("min_poly: [-1, -1, 0, 1]"));
  }
  SUBCASE("invalid invariant values") {
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 1]\ninvariants: {w: 1}"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 1]\ninvariants: {h: 0}"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 1]\ninvariants: {R: -1.0}"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 1]\ninvariants: {bogus: 3}"), ConfigError);
  }
  SUBCASE("overrides must satisfy sum e f = d") {
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 1]\noverrides: {2: [[1, 1]]}"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0, 1]\noverrides: {4: [[2, 1]]}"), ConfigError);
    CHECK_NOTHROW(parse_field_spec("min_poly: [1, 0, 1]\noverrides: {2: [[2, 1]]}"));
  }
  SUBCASE("malformed text") {
    CHECK_THROWS_AS(parse_field_spec("min_poly: [1, 0"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("- 1\n- 2"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("min_poly: [a, b]"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("name: nothing"), ConfigError);
  }
}

TEST_CASE("content hash depends on content, not on the label") {
  const auto a = parse_field_spec("name: one\nmin_poly: [1, 0, 1]");
  const auto b = parse_field_spec("name: two\nmin_poly: [1, 0, 1]");
  const auto c = parse_field_spec("min_poly: [1, 0, 1]\ninvariants: {h: 1}");
  CHECK(a.content_hash() == b.content_hash());
  CHECK(a.content_hash() != c.content_hash());
  CHECK(a.content_hash().size() == 16);
}

TEST_CASE("fundamental discriminants") {
  CHECK(fundamental_discriminant(-4) == -4);
  CHECK(fundamental_discriminant(-20) == -20);
  CHECK(fundamental_discriminant(8) == 8);
  CHECK(fundamental_discriminant(5) == 5);
  CHECK(fundamental_discriminant(-3) == -3);
  CHECK(fundamental_discriminant(12) == 12);  // x^2 - 3
  CHECK(fundamental_discriminant(-12) == -3);  // x^2 + 3: Z[sqrt(-3)] is not maximal
  CHECK(fundamental_discriminant(72) == 8);
  CHECK(parse_field_spec("min_poly: [1, 1, 1]").quadratic_discriminant() == -3);
}

TEST_CASE("kronecker_symbol") {
  CHECK(kronecker_symbol(-4, 5) == 1);
  CHECK(kronecker_symbol(-4, 3) == -1);
  CHECK(kronecker_symbol(-4, 2) == 0);
  CHECK_THROWS_AS(kronecker_symbol(-4, 9), DomainError);
  SUBCASE("odd primes match squares mod p") {
    for (std::int64_t D : {-20, -4, -3, 5, 8, 12, 13, -7}) {
      for (std::uint64_t p : primes_up_to(200)) {
        if (p == 2) continue;
        CHECK(kronecker_symbol(D, p) == testing::brute_legendre(D, p));
      }
    }
  }
  SUBCASE("p = 2 follows D mod 8") {
    CHECK(kronecker_symbol(-7, 2) == 1);
    CHECK(kronecker_symbol(17, 2) == 1);
    CHECK(kronecker_symbol(5, 2) == -1);
    CHECK(kronecker_symbol(-3, 2) == -1);
    CHECK(kronecker_symbol(8, 2) == 0);
  }
}

namespace {

gf::Poly expand(const PolyFactorization& f, std::uint64_t p) {
  gf::Poly out{f.unit};
  for (const auto& fp : f.factors)
    for (unsigned k = 0; k < fp.multiplicity; ++k) out = gf::mul(out, fp.factor, p);
  return out;
}

}  // namespace

TEST_CASE("factor_poly_mod_p") {
  const std::vector<std::int64_t> x2p1{1, 0, 1};
  SUBCASE("x^2 + 1 mod 5 splits as (x + 2)(x + 3)") {
    const auto f = factor_poly_mod_p(x2p1, 5);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == FactorPower{{2, 1}, 1});
    CHECK(f.factors[1] == FactorPower{{3, 1}, 1});
  }
  SUBCASE("x^2 + 1 mod 3 is irreducible") {
    const auto f = factor_poly_mod_p(x2p1, 3);
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0] == FactorPower{{1, 0, 1}, 1});
  }
  SUBCASE("x^2 + 1 mod 2 is (x + 1)^2") {
    const auto f = factor_poly_mod_p(x2p1, 2);
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0] == FactorPower{{1, 1}, 2});
  }
  SUBCASE("p-th powers in characteristic p") {
    // x^6 + 1 = (x^2 + 1)^3 mod 3
    const auto f = factor_poly_mod_p(std::vector<std::int64_t>{1, 0, 0, 0, 0, 0, 1}, 3);
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0] == FactorPower{{1, 0, 1}, 3});
  }
  SUBCASE("non-monic input keeps its unit") {
    const std::vector<std::int64_t> poly{3, 0, 2};  // 2x^2 + 3 mod 7
    const auto f = factor_poly_mod_p(poly, 7);
    CHECK(f.unit == 2);
    CHECK(expand(f, 7) == gf::reduce(poly, 7));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(factor_poly_mod_p(x2p1, 4), DomainError);
    CHECK_THROWS_AS(factor_poly_mod_p(std::vector<std::int64_t>{5, 10}, 5), DomainError);
  }
  SUBCASE("repeated calls agree") {
    const std::vector<std::int64_t> poly{-1, 3, -7, 0, 2, 5, 1};
    for (std::uint64_t p : {2, 3, 101, 1000003}) {
      const auto a = factor_poly_mod_p(poly, p);
      const auto b = factor_poly_mod_p(poly, p);
      const auto c = factor_poly_mod_p(poly, p, 12345);
      CHECK(a.factors == b.factors);
      CHECK(a.factors == c.factors);
    }
  }
}

TEST_CASE("factor_poly_mod_p reproduces its input on random instances") {
  SplitMix64 rng(2024);
  const auto primes = primes_up_to(2000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t p = trial % 10 == 0 ? 2 : primes[rng.below(primes.size())];
    const auto degree = 1 + rng.below(8);
    std::vector<std::int64_t> poly(degree + 1);
    for (auto& c : poly) c = static_cast<std::int64_t>(rng.below(2001)) - 1000;
    if (rng.below(3) == 0) {
      // Force a repeated factor now and then.
      gf::Poly sq = gf::reduce(poly, p);
      if (sq.empty()) continue;
      sq = gf::mul(sq, gf::reduce(std::vector<std::int64_t>{1, 1}, p), p);
      sq = gf::mul(sq, gf::reduce(std::vector<std::int64_t>{1, 1}, p), p);
      poly.assign(sq.begin(), sq.end());
    }
    const gf::Poly target = gf::reduce(poly, p);
    if (target.empty()) continue;
    const auto f = factor_poly_mod_p(poly, p);
    CHECK(expand(f, p) == target);
    for (const auto& fp : f.factors) {
      CHECK(fp.factor.back() == 1);
      // Irreducible over F_p: x^(p^k) = x mod g only for k = deg g among k <= deg g.
      const int k = gf::degree(fp.factor);
      gf::Poly frob = gf::mod(gf::Poly{0, 1}, fp.factor, p);
      for (int i = 1; i <= k; ++i) {
        frob = gf::pow_mod(frob, p, fp.factor, p);
        const gf::Poly diff = gf::sub(frob, gf::mod(gf::Poly{0, 1}, fp.factor, p), p);
        if (i < k) {
          CHECK(gf::degree(gf::gcd(diff, fp.factor, p)) == 0);
        } else {
          CHECK(diff.empty());
        }
      }
    }
    for (std::size_t i = 1; i < f.factors.size(); ++i) {
      const auto& a = f.factors[i - 1].factor;
      const auto& b = f.factors[i].factor;
      CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
    }
  }
}

TEST_CASE("split_prime") {
  const auto Qi = testing::field("gaussian");
  const auto Q = testing::field("rationals");
  CHECK(split_prime(Qi, 5) == SplittingType{{{1, 1}, {1, 1}}});
  CHECK(split_prime(Qi, 3) == SplittingType{{{1, 2}}});
  CHECK(split_prime(Qi, 2) == SplittingType{{{2, 1}}});
  for (std::uint64_t p : {2, 3, 5, 97}) CHECK(split_prime(Q, p) == SplittingType{{{1, 1}}});
  CHECK_THROWS_AS(split_prime(Qi, 15), DomainError);
  CHECK(split_prime(Qi, 5).is_split_completely());
  CHECK(split_prime(Qi, 3).is_inert());
  CHECK(split_prime(Qi, 2).is_ramified());
  CHECK(split_prime(Qi, 2).to_string() == "[[2,1]]");
}

TEST_CASE("split_prime on a cubic field follows root counts") {
  const auto K = testing::field("cube_root2");
  for (std::uint64_t p : primes_up_to(400)) {
    const auto st = split_prime(K, p);
    CHECK(st.degree() == 3);
    if (p == 2 || p == 3) {
      CHECK(st == SplittingType{{{3, 1}}});
      continue;
    }
    unsigned roots = 0;
    for (std::uint64_t y = 0; y < p; ++y)
      if ((y * y % p * y + p - 2) % p == 0) ++roots;
    // 3 roots: split; 1 root: linear times irreducible quadratic; 0: inert.
    if (roots == 3) CHECK(st == SplittingType{{{1, 1}, {1, 1}, {1, 1}}});
    if (roots == 1) CHECK(st == SplittingType{{{1, 1}, {1, 2}}});
    if (roots == 0) CHECK(st == SplittingType{{{1, 3}}});
  }
  CHECK(split_prime(K, 5) == SplittingType{{{1, 1}, {1, 2}}});
  CHECK(split_prime(K, 7) == SplittingType{{{1, 3}}});
  CHECK(split_prime(K, 31) == SplittingType{{{1, 1}, {1, 1}, {1, 1}}});
}

TEST_CASE("degree >= 3 refuses primes dividing the polynomial discriminant") {
  const auto K = parse_field_spec("min_poly: [-2, 0, 0, 1]");
  CHECK_THROWS_AS(split_prime(K, 2), UnsupportedPrime);
  CHECK_THROWS_AS(split_prime(K, 3), UnsupportedPrime);
  CHECK_NOTHROW(split_prime(K, 5));
  try {
    split_prime(K, 3);
  } catch (const UnsupportedPrime& e) {
    CHECK(e.prime() == 3);
  }
}

TEST_CASE("overrides take precedence") {
  const auto K = parse_field_spec("min_poly: [1, 0, 1]\noverrides: {5: [[1, 2]]}");
  CHECK(split_prime(K, 5) == SplittingType{{{1, 2}}});
}

TEST_CASE("split_prime is deterministic and satisfies sum e f = d") {
  const auto K = parse_field_spec("min_poly: [1, -1, 0, 0, 0, 1]");
  for (std::uint64_t p : primes_up_to(3000)) {
    try {
      const auto a = split_prime(K, p);
      CHECK(a.degree() == 5);
      CHECK(a == split_prime(K, p));
    } catch (const UnsupportedPrime&) {
      CHECK_FALSE(gf::is_squarefree(gf::reduce(K.min_poly(), p), p));
    }
  }
}

TEST_CASE("split primes have density 1/2 in quadratic fields") {
  const auto primes = primes_up_to(200000);
  REQUIRE(primes.size() >= 10000);
  for (const char* name : {"gaussian", "sqrt_minus5", "sqrt2"}) {
    const auto K = testing::field(name);
    int split = 0;
    for (std::size_t i = 0; i < 10000; ++i) split += split_prime(K, primes[i]).is_split_completely();
    CHECK_MESSAGE(std::abs(split / 10000.0 - 0.5) <= 0.05, name);
  }
}
