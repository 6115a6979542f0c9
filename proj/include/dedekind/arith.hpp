#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dedekind/errors.hpp"

namespace dedekind {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("u64 multiplication overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("i64 multiplication overflow");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("i64 addition overflow");
  return r;
}

// p^k, throwing OverflowError instead of wrapping.
std::uint64_t checked_pow(std::uint64_t p, unsigned k);

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// spf[n] = smallest prime factor of n for 2 <= n <= limit (spf[0] = spf[1] = 0).
std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit);

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Largest k with k*k <= n.
std::uint64_t isqrt(std::uint64_t n);

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      carry_ += (sum_ - t) + v;
    else
      carry_ += (v - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// 64-bit FNV-1a, used for content hashes and deterministic seeds.
class Fnv1a {
 public:
  Fnv1a& add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a& add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (v >> (8 * i)) & 0xff;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// SplitMix64; small, seedable, and identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return (*this)() % bound; }

 private:
  std::uint64_t state_;
};

}  // namespace dedekind
