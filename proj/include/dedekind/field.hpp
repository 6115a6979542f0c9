#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dedekind/poly_mod_p.hpp"

namespace dedekind {

// Known arithmetic invariants of a field. Every member is optional in a
// config; residue_from_formula needs all of them.
struct FieldInvariants {
  std::optional<int> r1;             // real embeddings
  std::optional<int> r2;             // pairs of complex embeddings
  std::optional<std::int64_t> h;     // class number
  std::optional<double> regulator;   // R
  std::optional<int> w;              // roots of unity
  std::optional<std::int64_t> disc;  // d_K
};

// One prime ideal above p: ramification index e, residue degree f.
struct SplitFactor {
  unsigned e = 1;
  unsigned f = 1;

  friend auto operator<=>(const SplitFactor&, const SplitFactor&) = default;
};

// Shape of pO_K. Factors are kept sorted by (f, e).
struct SplittingType {
  std::vector<SplitFactor> factors;

  unsigned degree() const;  // sum of e*f
  bool is_split_completely() const;
  bool is_inert() const;
  bool is_ramified() const;
  std::string to_string() const;  // e.g. "[[1,1],[1,1]]"

  friend bool operator==(const SplittingType&, const SplittingType&) = default;
};

struct PrimeIdealRef {
  std::uint64_t p = 0;
  unsigned f = 1;
  unsigned e = 1;
  unsigned slot = 0;  // index among the primes above p
  std::uint64_t norm = 0;

  friend bool operator==(const PrimeIdealRef&, const PrimeIdealRef&) = default;
};

// Throws OverflowError if p^f does not fit in 64 bits.
PrimeIdealRef make_prime_ideal(std::uint64_t p, SplitFactor factor, unsigned slot);

// A number field presented by a monic irreducible integer polynomial
// (constant term first). Immutable once constructed.
struct FieldOptions {
  // Primes used by the irreducibility heuristic, and the cap on trial
  // divisors of the constant term in the rational-root search.
  std::uint64_t trial_bound = 200;
};

class FieldSpec {
 public:
  static FieldSpec create(std::vector<std::int64_t> min_poly, FieldInvariants invariants = {},
                          std::map<std::uint64_t, SplittingType> overrides = {}, std::string name = {},
                          FieldOptions options = {});

  unsigned degree() const { return static_cast<unsigned>(min_poly_.size() - 1); }
  const std::vector<std::int64_t>& min_poly() const { return min_poly_; }
  const FieldInvariants& invariants() const { return invariants_; }
  const std::map<std::uint64_t, SplittingType>& overrides() const { return overrides_; }
  const std::string& name() const { return name_; }

  // Field discriminant used for quadratic splitting: invariants.disc when
  // given, else the fundamental discriminant of the defining polynomial.
  // Only meaningful for degree 2.
  std::int64_t quadratic_discriminant() const { return quadratic_disc_; }

  // 16 hex digits; a function of the polynomial, invariants and overrides.
  const std::string& content_hash() const { return hash_; }

 private:
  FieldSpec() = default;

  std::vector<std::int64_t> min_poly_;
  FieldInvariants invariants_;
  std::map<std::uint64_t, SplittingType> overrides_;
  std::string name_;
  std::int64_t quadratic_disc_ = 0;
  std::string hash_;
};

// YAML field config; see docs in README ("Field config files").
FieldSpec parse_field_spec(std::string_view config_text);
FieldSpec load_field_spec(const std::filesystem::path& path);

// Kronecker symbol (D|p) for prime p, with (D|2) = 0 for even D and
// +1 / -1 according to D = +-1 / +-3 mod 8 otherwise.
int kronecker_symbol(std::int64_t D, std::uint64_t p);

// Fundamental discriminant of Q(sqrt(D)) for a non-square integer D.
std::int64_t fundamental_discriminant(std::int64_t D);

// Factorization shape of the rational prime p in the field. Overrides win;
// degree 2 uses the Kronecker symbol of the field discriminant; degree >= 3
// applies Dedekind's theorem and throws UnsupportedPrime when p divides
// disc(min_poly).
SplittingType split_prime(const FieldSpec& field, std::uint64_t p);

namespace detail {
// split_prime without the primality test, for callers iterating a sieve.
SplittingType split_sieved_prime(const FieldSpec& field, std::uint64_t p);
}  // namespace detail

}  // namespace dedekind
