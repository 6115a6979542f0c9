#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dedekind {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent field configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's precondition (non-prime modulus, bad range).
class DomainError : public Error {
 public:
  using Error::Error;
};

// 64-bit norm or coefficient arithmetic would wrap.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// The splitting of p cannot be determined without guessing: the field has
// degree >= 3, p divides disc(min_poly), and no override was supplied.
class UnsupportedPrime : public Error {
 public:
  explicit UnsupportedPrime(std::uint64_t p)
      : Error("unsupported prime " + std::to_string(p) +
              ": divides disc(min_poly) and no splitting override given"),
        prime_(p) {}

  std::uint64_t prime() const noexcept { return prime_; }

 private:
  std::uint64_t prime_;
};

}  // namespace dedekind
