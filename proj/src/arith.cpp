#include "dedekind/arith.hpp"

namespace dedekind {

std::uint64_t checked_pow(std::uint64_t p, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) r = checked_mul(r, p);
  return r;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic below 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit) {
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    // Linear sieve: every composite is struck exactly once, by its spf.
    for (std::uint32_t p : primes) {
      const std::uint64_t m = i * p;
      if (p > spf[i] || m > limit) break;
      spf[m] = p;
    }
  }
  return spf;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

}  // namespace dedekind
