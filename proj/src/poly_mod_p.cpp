#include "dedekind/poly_mod_p.hpp"

#include <algorithm>

#include "dedekind/arith.hpp"
#include "dedekind/errors.hpp"

namespace dedekind {
namespace gf {

namespace {

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return dedekind::pow_mod(a, p - 2, p); }

}  // namespace

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly reduce(std::span<const std::int64_t> coeffs, std::uint64_t p) {
  Poly out;
  out.reserve(coeffs.size());
  const auto sp = static_cast<__int128>(p);
  for (std::int64_t c : coeffs) {
    __int128 r = static_cast<__int128>(c) % sp;
    if (r < 0) r += sp;
    out.push_back(static_cast<std::uint64_t>(r));
  }
  trim(out);
  return out;
}

Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t x = i < a.size() ? a[i] : 0;
    const std::uint64_t y = i < b.size() ? b[i] : 0;
    out[i] = (x + y) % p;
  }
  trim(out);
  return out;
}

Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t x = i < a.size() ? a[i] : 0;
    const std::uint64_t y = i < b.size() ? b[i] : 0;
    out[i] = (x + p - y) % p;
  }
  trim(out);
  return out;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = (out[i + j] + mul_mod(a[i], b[j], p)) % p;
    }
  }
  trim(out);
  return out;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::uint64_t p) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  Poly rem = a;
  if (rem.size() < b.size()) return {Poly{}, rem};
  Poly quot(rem.size() - b.size() + 1, 0);
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  for (std::size_t i = rem.size(); i-- >= b.size();) {
    const std::uint64_t q = mul_mod(rem[i], lead_inv, p);
    const std::size_t shift = i - (b.size() - 1);
    quot[shift] = q;
    if (q == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      rem[shift + j] = (rem[shift + j] + p - mul_mod(q, b[j], p)) % p;
    }
  }
  trim(quot);
  trim(rem);
  return {quot, rem};
}

Poly mod(const Poly& a, const Poly& b, std::uint64_t p) { return divmod(a, b, p).second; }

Poly derivative(const Poly& a, std::uint64_t p) {
  Poly out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(mul_mod(a[i], i % p, p));
  trim(out);
  return out;
}

Poly make_monic(const Poly& a, std::uint64_t p) {
  if (a.empty()) return a;
  const std::uint64_t inv = inv_mod(a.back(), p);
  Poly out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mul_mod(a[i], inv, p);
  return out;
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

Poly pow_mod(Poly base, std::uint64_t exp, const Poly& modulus, std::uint64_t p) {
  Poly result = mod(Poly{1}, modulus, p);
  base = mod(base, modulus, p);
  while (exp) {
    if (exp & 1) result = mod(mul(result, base, p), modulus, p);
    exp >>= 1;
    if (exp) base = mod(mul(base, base, p), modulus, p);
  }
  return result;
}

bool is_squarefree(const Poly& a, std::uint64_t p) {
  const Poly g = gcd(a, derivative(a, p), p);
  return degree(g) == 0;
}

}  // namespace gf

namespace {

using gf::Poly;

// Over F_p the p-th root of a polynomial whose exponents are all multiples of p.
Poly pth_root(const Poly& a, std::uint64_t p) {
  Poly out;
  for (std::size_t i = 0; i < a.size(); i += p) out.push_back(a[i]);
  gf::trim(out);
  return out;
}

// Monic input; returns (squarefree part, multiplicity) pairs.
void squarefree_decompose(const Poly& f, std::uint64_t p, unsigned scale,
                          std::vector<std::pair<Poly, unsigned>>& out) {
  Poly c = gf::gcd(f, gf::derivative(f, p), p);
  Poly w = gf::divmod(f, c, p).first;
  unsigned i = 1;
  while (gf::degree(w) > 0) {
    Poly y = gf::gcd(w, c, p);
    Poly part = gf::divmod(w, y, p).first;
    if (gf::degree(part) > 0) out.emplace_back(std::move(part), i * scale);
    w = std::move(y);
    c = gf::divmod(c, w, p).first;
    ++i;
  }
  if (gf::degree(c) > 0) squarefree_decompose(pth_root(c, p), p, scale * static_cast<unsigned>(p), out);
}

// Squarefree monic input; returns (product of all irreducible factors of degree k, k).
std::vector<std::pair<Poly, unsigned>> distinct_degree(Poly f, std::uint64_t p) {
  std::vector<std::pair<Poly, unsigned>> out;
  const Poly x{0, 1};
  Poly h = gf::mod(x, f, p);
  unsigned k = 0;
  while (gf::degree(f) >= 2 * static_cast<int>(k + 1)) {
    ++k;
    h = gf::pow_mod(h, p, f, p);
    Poly g = gf::gcd(f, gf::sub(h, x, p), p);
    if (gf::degree(g) > 0) {
      f = gf::divmod(f, g, p).first;
      h = gf::mod(h, f, p);
      out.emplace_back(std::move(g), k);
    }
  }
  if (gf::degree(f) > 0) out.emplace_back(f, static_cast<unsigned>(gf::degree(f)));
  return out;
}

// Cantor-Zassenhaus: f squarefree, monic, every irreducible factor of degree k.
void equal_degree(const Poly& f, unsigned k, std::uint64_t p, SplitMix64& rng, std::vector<Poly>& out) {
  const int n = gf::degree(f);
  if (n == static_cast<int>(k)) {
    out.push_back(f);
    return;
  }
  for (;;) {
    Poly a(static_cast<std::size_t>(n), 0);
    for (auto& c : a) c = rng.below(p);
    gf::trim(a);
    if (gf::degree(a) < 1) continue;

    Poly t;
    if (p == 2) {
      // Trace map F_{2^k} -> F_2.
      Poly term = a;
      t = a;
      for (unsigned j = 1; j < k; ++j) {
        term = gf::mod(gf::mul(term, term, p), f, p);
        t = gf::add(t, term, p);
      }
    } else {
      // a^((p^k - 1)/2) = (a^(1 + p + ... + p^(k-1)))^((p-1)/2)
      Poly frob = a;
      Poly norm = a;
      for (unsigned j = 1; j < k; ++j) {
        frob = gf::pow_mod(frob, p, f, p);
        norm = gf::mod(gf::mul(norm, frob, p), f, p);
      }
      t = gf::sub(gf::pow_mod(norm, (p - 1) / 2, f, p), Poly{1}, p);
    }
    Poly g = gf::gcd(f, t, p);
    if (gf::degree(g) > 0 && gf::degree(g) < n) {
      equal_degree(g, k, p, rng, out);
      equal_degree(gf::divmod(f, g, p).first, k, p, rng, out);
      return;
    }
  }
}

}  // namespace

PolyFactorization factor_poly_mod_p(std::span<const std::int64_t> poly, std::uint64_t p,
                                    std::optional<std::uint64_t> seed) {
  if (!is_prime(p)) throw DomainError("factor_poly_mod_p: modulus " + std::to_string(p) + " is not prime");
  Poly f = gf::reduce(poly, p);
  if (f.empty()) throw DomainError("factor_poly_mod_p: polynomial vanishes mod " + std::to_string(p));

  PolyFactorization result;
  result.unit = f.back();
  f = gf::make_monic(f, p);
  if (gf::degree(f) == 0) return result;

  if (!seed) {
    Fnv1a h;
    h.add("factor_poly_mod_p");
    for (std::int64_t c : poly) h.add(static_cast<std::uint64_t>(c));
    h.add(p);
    seed = h.digest();
  }
  SplitMix64 rng(*seed);

  std::vector<std::pair<Poly, unsigned>> parts;
  squarefree_decompose(f, p, 1, parts);
  for (const auto& [part, multiplicity] : parts) {
    for (const auto& [block, k] : distinct_degree(part, p)) {
      std::vector<Poly> irreducibles;
      equal_degree(block, k, p, rng, irreducibles);
      for (auto& g : irreducibles) result.factors.push_back({std::move(g), multiplicity});
    }
  }
  std::sort(result.factors.begin(), result.factors.end(), [](const FactorPower& a, const FactorPower& b) {
    if (a.factor.size() != b.factor.size()) return a.factor.size() < b.factor.size();
    if (a.factor != b.factor) return a.factor < b.factor;
    return a.multiplicity < b.multiplicity;
  });
  return result;
}

}  // namespace dedekind
