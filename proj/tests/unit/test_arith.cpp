#include <cmath>

#include "doctest.h"
#include "dedekind/arith.hpp"
#include "support.hpp"

using namespace dedekind;

TEST_CASE("is_prime agrees with trial division") {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    bool trial = n >= 2;
    for (std::uint64_t q = 2; q * q <= n; ++q)
      if (n % q == 0) trial = false;
    CHECK_MESSAGE(is_prime(n) == trial, n);
  }
  CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  CHECK_FALSE(is_prime(3215031751ULL));      // strong pseudoprime to 2,3,5,7
}

TEST_CASE("smallest prime factors and prime list agree") {
  const auto spf = smallest_prime_factors(1000);
  const auto primes = primes_up_to(1000);
  CHECK(primes.size() == 168);
  for (std::uint64_t n = 2; n <= 1000; ++n) {
    CHECK(n % spf[n] == 0);
    CHECK(is_prime(spf[n]));
    CHECK((spf[n] == n) == is_prime(n));
  }
}

TEST_CASE("checked arithmetic throws on wrap") {
  CHECK(checked_pow(2, 63) == (std::uint64_t{1} << 63));
  CHECK_THROWS_AS(checked_pow(2, 64), OverflowError);
  CHECK_THROWS_AS(checked_add(INT64_MAX, std::int64_t{1}), OverflowError);
}

TEST_CASE("isqrt") {
  for (std::uint64_t n = 0; n < 10000; ++n) {
    const auto r = isqrt(n);
    CHECK(r * r <= n);
    CHECK((r + 1) * (r + 1) > n);
  }
  CHECK(isqrt(UINT64_MAX) == 4294967295ULL);
}

TEST_CASE("compensated summation recovers small terms") {
  CompensatedSum s;
  s += 1e16;
  for (int i = 0; i < 1000; ++i) s += 1.0;
  s += -1e16;
  CHECK(s.value() == 1000.0);
}
