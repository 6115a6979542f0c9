#include "dedekind/field.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "dedekind/arith.hpp"
#include "dedekind/errors.hpp"

namespace dedekind {

unsigned SplittingType::degree() const {
  unsigned total = 0;
  for (const auto& s : factors) total += s.e * s.f;
  return total;
}

bool SplittingType::is_split_completely() const {
  return std::all_of(factors.begin(), factors.end(), [](const SplitFactor& s) { return s.e == 1 && s.f == 1; });
}

bool SplittingType::is_inert() const { return factors.size() == 1 && factors[0].e == 1; }

bool SplittingType::is_ramified() const {
  return std::any_of(factors.begin(), factors.end(), [](const SplitFactor& s) { return s.e > 1; });
}

std::string SplittingType::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += ",";
    out += fmt::format("[{},{}]", factors[i].e, factors[i].f);
  }
  return out + "]";
}

PrimeIdealRef make_prime_ideal(std::uint64_t p, SplitFactor factor, unsigned slot) {
  return PrimeIdealRef{p, factor.f, factor.e, slot, checked_pow(p, factor.f)};
}

namespace {

// Horner evaluation in 128 bits; nullopt when an intermediate overflows.
std::optional<__int128> evaluate(const std::vector<std::int64_t>& poly, __int128 x) {
  __int128 acc = 0;
  constexpr __int128 limit = static_cast<__int128>(1) << 120;
  for (std::size_t i = poly.size(); i-- > 0;) {
    __int128 next;
    if (__builtin_mul_overflow(acc, x, &next) || __builtin_add_overflow(next, poly[i], &next)) return std::nullopt;
    if (next > limit || next < -limit) return std::nullopt;
    acc = next;
  }
  return acc;
}

bool is_perfect_square(__int128 v) {
  if (v < 0) return false;
  auto r = static_cast<__int128>(std::sqrt(static_cast<long double>(v)));
  for (__int128 c = (r > 2 ? r - 2 : 0); c <= r + 2; ++c)
    if (c * c == v) return true;
  return false;
}

std::set<unsigned> subset_sums(const std::vector<unsigned>& degrees) {
  std::set<unsigned> sums{0};
  for (unsigned k : degrees) {
    std::set<unsigned> next = sums;
    for (unsigned s : sums) next.insert(s + k);
    sums = std::move(next);
  }
  return sums;
}

// Bounded heuristic: finds rational roots among trial divisors of the
// constant term, decides quadratics exactly, and certifies irreducibility
// when factorization degree patterns mod small primes rule out every proper
// factor degree. An uncertified polynomial is accepted.
void check_irreducible(const std::vector<std::int64_t>& poly, std::uint64_t trial_bound) {
  const std::size_t d = poly.size() - 1;
  if (d == 1) return;
  const std::int64_t a0 = poly[0];
  if (a0 == 0) throw ConfigError("reducible min_poly: x divides it");

  const std::uint64_t abs_a0 = a0 < 0 ? static_cast<std::uint64_t>(-(a0 + 1)) + 1 : static_cast<std::uint64_t>(a0);
  for (std::uint64_t q = 1; q <= trial_bound && q <= abs_a0; ++q) {
    if (abs_a0 % q != 0) continue;
    for (std::uint64_t cand : {q, abs_a0 / q}) {
      for (int sign : {1, -1}) {
        const __int128 r = sign * static_cast<__int128>(cand);
        auto v = evaluate(poly, r);
        if (v && *v == 0)
          throw ConfigError(fmt::format("reducible min_poly: rational root {}", static_cast<long long>(r)));
      }
    }
  }
  if (d == 2) {
    const __int128 disc = static_cast<__int128>(poly[1]) * poly[1] - 4 * static_cast<__int128>(poly[0]);
    if (is_perfect_square(disc)) throw ConfigError("reducible min_poly: quadratic with square discriminant");
    return;
  }

  std::set<unsigned> possible;
  for (unsigned k = 0; k <= d; ++k) possible.insert(k);
  for (std::uint64_t p : primes_up_to(trial_bound)) {
    gf::Poly f = gf::reduce(poly, p);
    if (!gf::is_squarefree(f, p)) continue;
    std::vector<unsigned> degrees;
    for (const auto& fp : factor_poly_mod_p(poly, p).factors) degrees.push_back(static_cast<unsigned>(gf::degree(fp.factor)));
    std::set<unsigned> sums = subset_sums(degrees);
    std::set<unsigned> both;
    std::set_intersection(possible.begin(), possible.end(), sums.begin(), sums.end(), std::inserter(both, both.begin()));
    possible = std::move(both);
    if (possible.size() == 2) return;
  }
}

void check_invariants(FieldInvariants& inv, unsigned d) {
  if (inv.r1 && inv.r2) {
    if (*inv.r1 < 0 || *inv.r2 < 0 || *inv.r1 + 2 * *inv.r2 != static_cast<int>(d))
      throw ConfigError(fmt::format("inconsistent invariants: r1 + 2*r2 = {} but degree is {}", *inv.r1 + 2 * *inv.r2, d));
  } else if (inv.r1) {
    const int rest = static_cast<int>(d) - *inv.r1;
    if (*inv.r1 < 0 || rest < 0 || rest % 2 != 0)
      throw ConfigError(fmt::format("inconsistent invariants: r1 = {} incompatible with degree {}", *inv.r1, d));
    inv.r2 = rest / 2;
  } else if (inv.r2) {
    const int r1 = static_cast<int>(d) - 2 * *inv.r2;
    if (*inv.r2 < 0 || r1 < 0)
      throw ConfigError(fmt::format("inconsistent invariants: r2 = {} incompatible with degree {}", *inv.r2, d));
    inv.r1 = r1;
  }
  if (inv.w && *inv.w < 2) throw ConfigError("invalid invariants: w must be >= 2");
  if (inv.h && *inv.h < 1) throw ConfigError("invalid invariants: h must be >= 1");
  if (inv.regulator && !(*inv.regulator > 0.0)) throw ConfigError("invalid invariants: R must be > 0");
  if (inv.disc && *inv.disc == 0) throw ConfigError("invalid invariants: d_K must be non-zero");
}

std::string compute_hash(const std::vector<std::int64_t>& poly, const FieldInvariants& inv,
                         const std::map<std::uint64_t, SplittingType>& overrides) {
  auto opt = [](const auto& v) { return v ? fmt::format("{}", *v) : std::string("-"); };
  std::string canon = "poly:";
  for (std::int64_t c : poly) canon += fmt::format("{},", c);
  canon += fmt::format(";inv:{},{},{},{},{},{}", opt(inv.r1), opt(inv.r2), opt(inv.h),
                       inv.regulator ? fmt::format("{:.17g}", *inv.regulator) : std::string("-"), opt(inv.w),
                       opt(inv.disc));
  canon += ";ovr:";
  for (const auto& [p, st] : overrides) canon += fmt::format("{}={};", p, st.to_string());
  return fmt::format("{:016x}", Fnv1a().add(canon).digest());
}

SplittingType split_known_prime(const FieldSpec& field, std::uint64_t p) {
  if (auto it = field.overrides().find(p); it != field.overrides().end()) return it->second;
  const unsigned d = field.degree();
  SplittingType out;
  if (d == 1) {
    out.factors = {{1, 1}};
  } else if (d == 2) {
    switch (kronecker_symbol(field.quadratic_discriminant(), p)) {
      case 1: out.factors = {{1, 1}, {1, 1}}; break;
      case -1: out.factors = {{1, 2}}; break;
      default: out.factors = {{2, 1}}; break;
    }
  } else {
    const gf::Poly reduced = gf::reduce(field.min_poly(), p);
    if (!gf::is_squarefree(reduced, p)) throw UnsupportedPrime(p);
    const std::uint64_t seed = Fnv1a().add(field.content_hash()).add(p).digest();
    for (const auto& fp : factor_poly_mod_p(field.min_poly(), p, seed).factors)
      out.factors.push_back({fp.multiplicity, static_cast<unsigned>(gf::degree(fp.factor))});
    std::sort(out.factors.begin(), out.factors.end(),
              [](const SplitFactor& a, const SplitFactor& b) { return std::tie(a.f, a.e) < std::tie(b.f, b.e); });
  }
  return out;
}

}  // namespace

FieldSpec FieldSpec::create(std::vector<std::int64_t> min_poly, FieldInvariants invariants,
                            std::map<std::uint64_t, SplittingType> overrides, std::string name, FieldOptions options) {
  if (min_poly.size() < 2) throw ConfigError("min_poly must have degree >= 1");
  if (min_poly.back() != 1) throw ConfigError("min_poly must be monic (leading coefficient 1)");
  const auto d = static_cast<unsigned>(min_poly.size() - 1);
  check_irreducible(min_poly, options.trial_bound);
  check_invariants(invariants, d);
  for (auto& [p, st] : overrides) {
    if (!is_prime(p)) throw ConfigError(fmt::format("override key {} is not prime", p));
    if (st.factors.empty()) throw ConfigError(fmt::format("override for {} is empty", p));
    for (const auto& s : st.factors)
      if (s.e < 1 || s.f < 1) throw ConfigError(fmt::format("override for {}: e and f must be >= 1", p));
    if (st.degree() != d)
      throw ConfigError(fmt::format("override for {}: sum of e*f is {} but degree is {}", p, st.degree(), d));
    std::sort(st.factors.begin(), st.factors.end(),
              [](const SplitFactor& a, const SplitFactor& b) { return std::tie(a.f, a.e) < std::tie(b.f, b.e); });
  }

  FieldSpec spec;
  spec.min_poly_ = std::move(min_poly);
  spec.invariants_ = invariants;
  spec.overrides_ = std::move(overrides);
  spec.name_ = std::move(name);
  if (d == 2) {
    spec.quadratic_disc_ = invariants.disc
                               ? *invariants.disc
                               : fundamental_discriminant(spec.min_poly_[1] * spec.min_poly_[1] - 4 * spec.min_poly_[0]);
  }
  spec.hash_ = compute_hash(spec.min_poly_, spec.invariants_, spec.overrides_);
  return spec;
}

FieldSpec parse_field_spec(std::string_view config_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(config_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed field config: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("field config must be a mapping");
  try {
    const YAML::Node poly = root["min_poly"];
    if (!poly || !poly.IsSequence()) throw ConfigError("field config needs a min_poly integer list");
    std::vector<std::int64_t> coeffs;
    for (const auto& c : poly) coeffs.push_back(c.as<std::int64_t>());

    FieldInvariants inv;
    if (const YAML::Node n = root["invariants"]) {
      if (!n.IsMap()) throw ConfigError("invariants must be a mapping");
      for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (key == "r1") inv.r1 = kv.second.as<int>();
        else if (key == "r2") inv.r2 = kv.second.as<int>();
        else if (key == "h") inv.h = kv.second.as<std::int64_t>();
        else if (key == "R") inv.regulator = kv.second.as<double>();
        else if (key == "w") inv.w = kv.second.as<int>();
        else if (key == "d_K") inv.disc = kv.second.as<std::int64_t>();
        else throw ConfigError("unknown invariant key: " + key);
      }
    }

    std::map<std::uint64_t, SplittingType> overrides;
    if (const YAML::Node n = root["overrides"]) {
      if (!n.IsMap()) throw ConfigError("overrides must be a mapping p -> [[e,f],...]");
      for (const auto& kv : n) {
        SplittingType st;
        for (const auto& pair : kv.second) {
          if (!pair.IsSequence() || pair.size() != 2) throw ConfigError("override entries must be [e, f] pairs");
          st.factors.push_back({pair[0].as<unsigned>(), pair[1].as<unsigned>()});
        }
        overrides[kv.first.as<std::uint64_t>()] = std::move(st);
      }
    }

    FieldOptions options;
    if (const YAML::Node n = root["trial_bound"]) options.trial_bound = n.as<std::uint64_t>();
    std::string name = root["name"] ? root["name"].as<std::string>() : std::string{};
    return FieldSpec::create(std::move(coeffs), inv, std::move(overrides), std::move(name), options);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed field config: ") + e.what());
  }
}

FieldSpec load_field_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read field config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_field_spec(buf.str());
}

int kronecker_symbol(std::int64_t D, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError(fmt::format("kronecker_symbol: {} is not prime", p));
  if (p == 2) {
    if (D % 2 == 0) return 0;
    const std::int64_t r = ((D % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
  }
  __int128 a = static_cast<__int128>(D) % static_cast<__int128>(p);
  if (a < 0) a += p;
  if (a == 0) return 0;
  return pow_mod(static_cast<std::uint64_t>(a), (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::int64_t fundamental_discriminant(std::int64_t D) {
  if (D == 0) throw DomainError("fundamental_discriminant: D = 0");
  std::int64_t m = D < 0 ? -1 : 1;
  std::uint64_t rest = D < 0 ? static_cast<std::uint64_t>(-D) : static_cast<std::uint64_t>(D);
  for (std::uint64_t q = 2; q * q <= rest; ++q) {
    while (rest % (q * q) == 0) rest /= q * q;
    if (rest % q == 0) {
      m *= static_cast<std::int64_t>(q);
      rest /= q;
    }
  }
  m *= static_cast<std::int64_t>(rest);
  if (m == 1) throw DomainError("fundamental_discriminant: D is a perfect square");
  return (((m % 4) + 4) % 4 == 1) ? m : 4 * m;
}

SplittingType split_prime(const FieldSpec& field, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError(fmt::format("split_prime: {} is not prime", p));
  return split_known_prime(field, p);
}

namespace detail {
SplittingType split_sieved_prime(const FieldSpec& field, std::uint64_t p) { return split_known_prime(field, p); }
}  // namespace detail

}  // namespace dedekind
