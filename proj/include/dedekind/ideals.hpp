#pragma once

// Prime ideals and integral ideals of bounded norm, represented by their
// factorization into prime ideals, plus the per-ideal arithmetic functions.
// Enumeration here is the brute-force oracle the aggregated coefficient
// sieve is checked against.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dedekind/arith.hpp"
#include "dedekind/field.hpp"

namespace dedekind {

// Splitting types of every rational prime up to a bound, stored flat.
class SplittingTable {
 public:
  // Throws UnsupportedPrime for the first prime that cannot be split.
  static SplittingTable build(const FieldSpec& field, std::uint64_t bound);

  SplittingTable() = default;
  SplittingTable(std::string field_hash, std::uint64_t bound, unsigned degree);

  void append(std::uint64_t p, std::span<const SplitFactor> factors);

  const std::string& field_hash() const { return field_hash_; }
  std::uint64_t bound() const { return bound_; }
  unsigned degree() const { return degree_; }
  std::size_t size() const { return primes_.size(); }
  std::uint64_t prime(std::size_t i) const { return primes_[i]; }
  std::span<const SplitFactor> factors(std::size_t i) const {
    return {factors_.data() + offsets_[i], factors_.data() + offsets_[i + 1]};
  }

  friend bool operator==(const SplittingTable&, const SplittingTable&) = default;

 private:
  std::string field_hash_;
  std::uint64_t bound_ = 0;
  unsigned degree_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<SplitFactor> factors_;
};

// Prime ideals of norm <= bound, sorted by (norm, p, slot).
std::vector<PrimeIdealRef> prime_ideals_up_to(const SplittingTable& table, std::uint64_t bound);
std::vector<PrimeIdealRef> prime_ideals_up_to(const FieldSpec& field, std::uint64_t bound);

struct IdealFactor {
  PrimeIdealRef prime;
  unsigned exponent = 1;

  friend bool operator==(const IdealFactor&, const IdealFactor&) = default;
};

struct IdealFactored {
  std::vector<IdealFactor> factors;  // sorted by (norm, p, slot)
  std::uint64_t norm = 1;

  bool is_unit() const { return factors.empty(); }
  friend bool operator==(const IdealFactored&, const IdealFactored&) = default;
};

// Product of factored ideals; overflow of the norm throws.
IdealFactored multiply(const IdealFactored& a, const IdealFactored& b);

int mobius(const IdealFactored& a);
int liouville(const IdealFactored& a);
double von_mangoldt(const IdealFactored& a);
std::uint64_t divisor_count(const IdealFactored& a);

namespace detail {

template <class Visitor>
void visit_ideals(std::span<const PrimeIdealRef> primes, std::size_t start, std::uint64_t bound,
                  IdealFactored& current, Visitor& visit) {
  visit(static_cast<const IdealFactored&>(current));
  for (std::size_t i = start; i < primes.size(); ++i) {
    const std::uint64_t q = primes[i].norm;
    if (current.norm > bound / q) break;  // primes are sorted by norm
    const std::uint64_t saved = current.norm;
    current.factors.push_back({primes[i], 0});
    while (current.norm <= bound / q) {
      current.norm *= q;
      ++current.factors.back().exponent;
      visit_ideals(primes, i + 1, bound, current, visit);
    }
    current.factors.pop_back();
    current.norm = saved;
  }
}

}  // namespace detail

// Calls visit(const IdealFactored&) once for every integral ideal of norm
// <= bound, depth-first over `primes` (which must be sorted by norm and
// contain every prime ideal of norm <= bound). Emission order is NOT sorted
// by norm.
template <class Visitor>
void for_each_ideal(std::span<const PrimeIdealRef> primes, std::uint64_t bound, Visitor&& visit) {
  if (bound < 1) throw DomainError("for_each_ideal: bound must be >= 1");
  if (bound > (std::uint64_t{1} << 63) - 1) throw OverflowError("for_each_ideal: bound exceeds 2^63 - 1");
  IdealFactored current;
  detail::visit_ideals(primes, 0, bound, current, visit);
}

// Materialized enumeration; intended for small bounds.
std::vector<IdealFactored> enumerate_ideals(const FieldSpec& field, std::uint64_t bound);

}  // namespace dedekind
