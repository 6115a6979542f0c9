#pragma once

// Shared fixtures and brute-force oracles. Nothing here calls into the
// sieve or enumeration code it is used to check.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dedekind/field.hpp"

namespace testing {

inline dedekind::FieldSpec field(const std::string& name) {
  return dedekind::load_field_spec(std::string(DEDEKIND_FIELDS_DIR) + "/" + name + ".yaml");
}

// Classical Moebius function by trial division.
inline int brute_mu(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

inline int brute_liouville(std::uint64_t n) {
  int omega = 0;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    while (n % q == 0) {
      n /= q;
      ++omega;
    }
  if (n > 1) ++omega;
  return omega % 2 ? -1 : 1;
}

inline int chi_minus4(std::uint64_t d) { return d % 2 == 0 ? 0 : (d % 4 == 1 ? 1 : -1); }

// Number of ideals of norm n in Z[i]: sum over d | n of chi_{-4}(d).
inline std::int64_t gaussian_ideal_count(std::uint64_t n) {
  std::int64_t total = 0;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) total += chi_minus4(d);
  return total;
}

inline std::uint64_t brute_divisor_count(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) ++c;
  return c;
}

// Legendre symbol by listing the squares mod p.
inline int brute_legendre(std::int64_t D, std::uint64_t p) {
  const auto a = static_cast<std::uint64_t>(((D % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                            static_cast<std::int64_t>(p));
  if (a == 0) return 0;
  for (std::uint64_t y = 1; y < p; ++y)
    if (y * y % p == a) return 1;
  return -1;
}

}  // namespace testing
