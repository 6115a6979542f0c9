#pragma once

// Dense univariate polynomials over the prime field F_p and their complete
// factorization (squarefree decomposition, distinct-degree splitting,
// Cantor-Zassenhaus equal-degree splitting).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dedekind {
namespace gf {

// Coefficients low -> high, reduced into [0, p), no trailing zeros.
// The zero polynomial is the empty vector.
using Poly = std::vector<std::uint64_t>;

Poly reduce(std::span<const std::int64_t> coeffs, std::uint64_t p);
void trim(Poly& a);
inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly add(const Poly& a, const Poly& b, std::uint64_t p);
Poly sub(const Poly& a, const Poly& b, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
// Quotient and remainder; b must be non-zero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::uint64_t p);
Poly mod(const Poly& a, const Poly& b, std::uint64_t p);
Poly derivative(const Poly& a, std::uint64_t p);
Poly make_monic(const Poly& a, std::uint64_t p);
// Monic gcd (zero if both inputs are zero).
Poly gcd(Poly a, Poly b, std::uint64_t p);
Poly pow_mod(Poly base, std::uint64_t exp, const Poly& modulus, std::uint64_t p);

bool is_squarefree(const Poly& a, std::uint64_t p);

}  // namespace gf

struct FactorPower {
  gf::Poly factor;  // monic irreducible
  unsigned multiplicity;

  friend bool operator==(const FactorPower&, const FactorPower&) = default;
};

struct PolyFactorization {
  std::uint64_t unit = 1;  // leading coefficient of the input mod p
  std::vector<FactorPower> factors;
};

// Complete factorization of `poly` (integer coefficients, constant term
// first) over F_p. Factors are sorted by degree, then lexicographically by
// coefficient vector. The randomized equal-degree step is seeded from `seed`,
// or from a hash of (poly, p) when no seed is given, so results are
// reproducible. Throws DomainError if p is not prime or poly vanishes mod p.
PolyFactorization factor_poly_mod_p(std::span<const std::int64_t> poly, std::uint64_t p,
                                    std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace dedekind
