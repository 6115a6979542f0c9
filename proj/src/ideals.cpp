#include "dedekind/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

namespace dedekind {

SplittingTable::SplittingTable(std::string field_hash, std::uint64_t bound, unsigned degree)
    : field_hash_(std::move(field_hash)), bound_(bound), degree_(degree) {}

void SplittingTable::append(std::uint64_t p, std::span<const SplitFactor> factors) {
  if (!primes_.empty() && p <= primes_.back()) throw DomainError("SplittingTable: primes must be appended in order");
  unsigned total = 0;
  for (const auto& s : factors) total += s.e * s.f;
  if (total != degree_)
    throw DomainError(fmt::format("SplittingTable: sum e*f = {} at p = {} but degree is {}", total, p, degree_));
  primes_.push_back(p);
  factors_.insert(factors_.end(), factors.begin(), factors.end());
  offsets_.push_back(static_cast<std::uint32_t>(factors_.size()));
}

SplittingTable SplittingTable::build(const FieldSpec& field, std::uint64_t bound) {
  SplittingTable table(field.content_hash(), bound, field.degree());
  for (std::uint64_t p : primes_up_to(bound)) {
    const SplittingType st = detail::split_sieved_prime(field, p);
    table.append(p, st.factors);
  }
  return table;
}

std::vector<PrimeIdealRef> prime_ideals_up_to(const SplittingTable& table, std::uint64_t bound) {
  if (bound > table.bound())
    throw DomainError(fmt::format("prime_ideals_up_to: bound {} exceeds table bound {}", bound, table.bound()));
  std::vector<PrimeIdealRef> out;
  for (std::size_t i = 0; i < table.size() && table.prime(i) <= bound; ++i) {
    const auto factors = table.factors(i);
    for (unsigned slot = 0; slot < factors.size(); ++slot) {
      // p^f may overflow for large f; such ideals exceed the bound anyway.
      std::uint64_t norm = 1;
      bool within = true;
      for (unsigned k = 0; k < factors[slot].f; ++k) {
        if (norm > bound / table.prime(i)) {
          within = false;
          break;
        }
        norm *= table.prime(i);
      }
      if (within) out.push_back(PrimeIdealRef{table.prime(i), factors[slot].f, factors[slot].e, slot, norm});
    }
  }
  std::sort(out.begin(), out.end(), [](const PrimeIdealRef& a, const PrimeIdealRef& b) {
    return std::tie(a.norm, a.p, a.slot) < std::tie(b.norm, b.p, b.slot);
  });
  return out;
}

std::vector<PrimeIdealRef> prime_ideals_up_to(const FieldSpec& field, std::uint64_t bound) {
  return prime_ideals_up_to(SplittingTable::build(field, bound), bound);
}

IdealFactored multiply(const IdealFactored& a, const IdealFactored& b) {
  IdealFactored out;
  out.norm = checked_mul(a.norm, b.norm);
  auto key = [](const IdealFactor& f) { return std::tie(f.prime.norm, f.prime.p, f.prime.slot); };
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() || (i < a.factors.size() && key(a.factors[i]) < key(b.factors[j]))) {
      out.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() || key(b.factors[j]) < key(a.factors[i])) {
      out.factors.push_back(b.factors[j++]);
    } else {
      out.factors.push_back({a.factors[i].prime, a.factors[i].exponent + b.factors[j].exponent});
      ++i;
      ++j;
    }
  }
  return out;
}

int mobius(const IdealFactored& a) {
  for (const auto& f : a.factors)
    if (f.exponent >= 2) return 0;
  return (a.factors.size() % 2 == 0) ? 1 : -1;
}

int liouville(const IdealFactored& a) {
  unsigned omega = 0;
  for (const auto& f : a.factors) omega += f.exponent;
  return (omega % 2 == 0) ? 1 : -1;
}

double von_mangoldt(const IdealFactored& a) {
  if (a.factors.size() != 1) return 0.0;
  return std::log(static_cast<double>(a.factors[0].prime.norm));
}

std::uint64_t divisor_count(const IdealFactored& a) {
  std::uint64_t n = 1;
  for (const auto& f : a.factors) n = checked_mul(n, std::uint64_t{f.exponent} + 1);
  return n;
}

std::vector<IdealFactored> enumerate_ideals(const FieldSpec& field, std::uint64_t bound) {
  const auto primes = prime_ideals_up_to(field, bound);
  std::vector<IdealFactored> out;
  for_each_ideal(primes, bound, [&](const IdealFactored& a) { out.push_back(a); });
  return out;
}

}  // namespace dedekind
