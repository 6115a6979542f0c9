#include "dedekind/dirichlet.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace dedekind {

std::string_view to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Zeta: return "zeta";
    case SeriesKind::InverseZeta: return "inv_zeta";
    case SeriesKind::LiouvilleRatio: return "liouville";
    case SeriesKind::NegLogDerivative: return "neg_log_deriv";
    case SeriesKind::ZetaSquared: return "zeta_squared";
  }
  return "?";
}

SeriesKind parse_series_kind(std::string_view name) {
  for (SeriesKind k : kAllSeriesKinds)
    if (name == to_string(k)) return k;
  if (name == "ZETA_K") return SeriesKind::Zeta;
  if (name == "INV_ZETA") return SeriesKind::InverseZeta;
  if (name == "LIOUVILLE_RATIO") return SeriesKind::LiouvilleRatio;
  if (name == "NEG_LOG_DERIV") return SeriesKind::NegLogDerivative;
  if (name == "ZETA_SQUARED") return SeriesKind::ZetaSquared;
  throw DomainError(fmt::format("unknown series kind '{}'", name));
}

std::vector<std::int64_t> integer_local_factor(SeriesKind kind, std::span<const SplitFactor> splitting,
                                               unsigned k_max) {
  std::vector<std::int64_t> c(k_max + 1, 0);
  c[0] = 1;
  // Multiply in place by 1/(1 - u^f), i.e. c_k += c_{k-f} ascending.
  auto geometric = [&](unsigned f) {
    for (unsigned k = f; k <= k_max; ++k) c[k] = checked_add(c[k], c[k - f]);
  };
  switch (kind) {
    case SeriesKind::Zeta:
      for (const auto& s : splitting) geometric(s.f);
      break;
    case SeriesKind::ZetaSquared:
      for (const auto& s : splitting) {
        geometric(s.f);
        geometric(s.f);
      }
      break;
    case SeriesKind::InverseZeta:
      for (const auto& s : splitting)
        for (unsigned k = k_max; k >= s.f && k > 0; --k) c[k] = checked_add(c[k], -c[k - s.f]);
      break;
    case SeriesKind::LiouvilleRatio:
      // 1/(1 + u^f)
      for (const auto& s : splitting)
        for (unsigned k = s.f; k <= k_max; ++k) c[k] = checked_add(c[k], -c[k - s.f]);
      break;
    case SeriesKind::NegLogDerivative:
      throw DomainError("integer_local_factor: neg_log_deriv is real-valued");
  }
  return c;
}

std::vector<double> local_factor(SeriesKind kind, std::span<const SplitFactor> splitting, std::uint64_t p,
                                 unsigned k_max) {
  if (kind != SeriesKind::NegLogDerivative) {
    const auto ints = integer_local_factor(kind, splitting, k_max);
    return {ints.begin(), ints.end()};
  }
  // -d/ds log prod_i (1 - u^f_i)^-1: each prime ideal of norm p^f
  // contributes f log p at every u^k with f | k.
  std::vector<double> c(k_max + 1, 0.0);
  const double log_p = std::log(static_cast<double>(p));
  for (unsigned k = 1; k <= k_max; ++k) {
    unsigned weight = 0;
    for (const auto& s : splitting)
      if (k % s.f == 0) weight += s.f;
    c[k] = weight * log_p;
  }
  return c;
}

CoeffTable::CoeffTable(SeriesKind kind, std::string field_hash, std::vector<std::int64_t> values)
    : kind_(kind), field_hash_(std::move(field_hash)), ints_(std::move(values)) {
  if (!is_integer_kind(kind)) throw DomainError("CoeffTable: integer storage for a real kind");
  if (ints_.empty()) throw DomainError("CoeffTable: empty");
}

CoeffTable::CoeffTable(SeriesKind kind, std::string field_hash, std::vector<double> values)
    : kind_(kind), field_hash_(std::move(field_hash)), reals_(std::move(values)) {
  if (is_integer_kind(kind)) throw DomainError("CoeffTable: real storage for an integer kind");
  if (reals_.empty()) throw DomainError("CoeffTable: empty");
}

std::uint64_t CoeffTable::size() const { return (is_integer() ? ints_.size() : reals_.size()) - 1; }

std::span<const std::int64_t> CoeffTable::integers() const {
  if (!is_integer()) throw DomainError("CoeffTable: neg_log_deriv has no integer view");
  return ints_;
}

std::span<const double> CoeffTable::reals() const {
  if (is_integer()) throw DomainError("CoeffTable: integer kinds have no real view; use as_reals()");
  return reals_;
}

std::vector<double> CoeffTable::as_reals() const {
  if (!is_integer()) return reals_;
  return {ints_.begin(), ints_.end()};
}

double CoeffTable::value(std::uint64_t n) const {
  return is_integer() ? static_cast<double>(ints_.at(n)) : reals_.at(n);
}

namespace {

unsigned max_exponent(std::uint64_t p, std::uint64_t N) {
  unsigned k = 0;
  for (std::uint64_t q = 1; q <= N / p; q *= p) ++k;
  return k;
}

}  // namespace

CoeffTable coefficients(SeriesKind kind, const SplittingTable& splitting, std::uint64_t N) {
  if (N < 1) throw DomainError("coefficients: N must be >= 1");
  if (N > splitting.bound())
    throw DomainError(fmt::format("coefficients: N = {} exceeds splitting table bound {}", N, splitting.bound()));
  if (N > 0xffffffffULL) throw DomainError("coefficients: N beyond 32-bit sieve range");

  if (kind == SeriesKind::NegLogDerivative) {
    std::vector<double> a(N + 1, 0.0);
    for (std::size_t i = 0; i < splitting.size() && splitting.prime(i) <= N; ++i) {
      const std::uint64_t p = splitting.prime(i);
      const auto local = local_factor(kind, splitting.factors(i), p, max_exponent(p, N));
      std::uint64_t pk = p;
      for (std::size_t k = 1; k < local.size(); ++k, pk *= p) a[pk] = local[k];
    }
    return CoeffTable(kind, splitting.field_hash(), std::move(a));
  }

  const auto spf = smallest_prime_factors(static_cast<std::uint32_t>(N));
  std::vector<std::int64_t> a(N + 1, 0);
  a[1] = 1;
  std::size_t prime_index = 0;
  for (std::uint64_t n = 2; n <= N; ++n) {
    const std::uint64_t p = spf[n];
    if (p == n) {
      while (splitting.prime(prime_index) < p) ++prime_index;
      const auto local = integer_local_factor(kind, splitting.factors(prime_index), max_exponent(p, N));
      std::uint64_t pk = p;
      for (std::size_t k = 1; k < local.size(); ++k, pk *= p) a[pk] = local[k];
      continue;
    }
    std::uint64_t m = n, pk = 1;
    while (m % p == 0) {
      m /= p;
      pk *= p;
    }
    if (m == 1) continue;  // prime power, written with its prime
    a[n] = checked_mul(a[pk], a[m]);
  }
  return CoeffTable(kind, splitting.field_hash(), std::move(a));
}

CoeffTable coefficients(SeriesKind kind, const FieldSpec& field, std::uint64_t N) {
  return coefficients(kind, SplittingTable::build(field, N), N);
}

std::string format_real(double v) { return fmt::format("{:.16e}", v); }

void write_csv(std::ostream& out, const CoeffTable& table) {
  out << "n,a_n\n";
  const std::uint64_t N = table.size();
  if (table.is_integer()) {
    const auto v = table.integers();
    for (std::uint64_t n = 1; n <= N; ++n) out << n << ',' << v[n] << '\n';
  } else {
    const auto v = table.reals();
    for (std::uint64_t n = 1; n <= N; ++n) out << n << ',' << format_real(v[n]) << '\n';
  }
}

}  // namespace dedekind
