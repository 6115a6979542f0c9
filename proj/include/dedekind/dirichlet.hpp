#pragma once

// Aggregated Dirichlet coefficients a_n = sum over ideals of norm n, built
// multiplicatively from per-prime local factors, and generic algebra on
// coefficient arrays.
//
// Coefficient arrays are 1-indexed: element n holds a_n, element 0 is unused
// and kept at zero. An array "up to N" therefore has N + 1 elements.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "dedekind/arith.hpp"
#include "dedekind/field.hpp"
#include "dedekind/ideals.hpp"

namespace dedekind {

enum class SeriesKind {
  Zeta,              // zeta_K(s):           F(n) = #{a : Na = n}
  InverseZeta,       // 1/zeta_K(s):         sum of mu_K
  LiouvilleRatio,    // zeta_K(2s)/zeta_K(s): sum of lambda_K
  NegLogDerivative,  // -zeta_K'/zeta_K:     sum of Lambda_K
  ZetaSquared,       // zeta_K(s)^2:         sum of d(a)
};

inline constexpr SeriesKind kAllSeriesKinds[] = {SeriesKind::Zeta, SeriesKind::InverseZeta,
                                                 SeriesKind::LiouvilleRatio, SeriesKind::NegLogDerivative,
                                                 SeriesKind::ZetaSquared};

std::string_view to_string(SeriesKind kind);
// Accepts the names printed by to_string (zeta, inv_zeta, liouville,
// neg_log_deriv, zeta_squared) and the upper-case aliases ZETA_K, INV_ZETA,
// LIOUVILLE_RATIO, NEG_LOG_DERIV, ZETA_SQUARED.
SeriesKind parse_series_kind(std::string_view name);
inline bool is_integer_kind(SeriesKind kind) { return kind != SeriesKind::NegLogDerivative; }

// Coefficients of the local Euler factor at p as a power series in u = p^-s,
// up to u^k_max. Integer kinds only.
std::vector<std::int64_t> integer_local_factor(SeriesKind kind, std::span<const SplitFactor> splitting,
                                               unsigned k_max);
// Any kind; NegLogDerivative needs p for log p.
std::vector<double> local_factor(SeriesKind kind, std::span<const SplitFactor> splitting, std::uint64_t p,
                                 unsigned k_max);

class CoeffTable {
 public:
  CoeffTable(SeriesKind kind, std::string field_hash, std::vector<std::int64_t> values);
  CoeffTable(SeriesKind kind, std::string field_hash, std::vector<double> values);

  SeriesKind kind() const { return kind_; }
  const std::string& field_hash() const { return field_hash_; }
  std::uint64_t size() const;  // N
  bool is_integer() const { return is_integer_kind(kind_); }

  // Exact values; throws for NegLogDerivative.
  std::span<const std::int64_t> integers() const;
  // Only for NegLogDerivative.
  std::span<const double> reals() const;
  // Any kind, converted to double.
  std::vector<double> as_reals() const;
  double value(std::uint64_t n) const;

 private:
  SeriesKind kind_;
  std::string field_hash_;
  std::vector<std::int64_t> ints_;
  std::vector<double> reals_;
};

// Multiplicative sieve over n <= N. The splitting table must cover N.
CoeffTable coefficients(SeriesKind kind, const SplittingTable& splitting, std::uint64_t N);
CoeffTable coefficients(SeriesKind kind, const FieldSpec& field, std::uint64_t N);

// CSV "n,a_n": exact integers, or 17 significant digits in scientific form.
void write_csv(std::ostream& out, const CoeffTable& table);
std::string format_real(double v);

template <class T>
std::vector<T> identity_at_one(std::uint64_t N) {
  std::vector<T> out(N + 1, T{0});
  if (N >= 1) out[1] = T{1};
  return out;
}

namespace detail {

inline void require_length(std::size_t size, std::uint64_t N, const char* what) {
  if (size < N + 1) throw DomainError(std::string(what) + ": coefficient array shorter than N");
}

template <class T>
T mul_add(T acc, T a, T b) {
  if constexpr (std::is_same_v<T, std::int64_t>)
    return checked_add(acc, checked_mul(a, b));
  else
    return acc + a * b;
}

}  // namespace detail

// c_n = sum_{d | n} a_d b_{n/d} for n <= N.
template <class T>
std::vector<T> dirichlet_multiply(std::span<const T> a, std::span<const T> b, std::uint64_t N) {
  detail::require_length(a.size(), N, "dirichlet_multiply");
  detail::require_length(b.size(), N, "dirichlet_multiply");
  std::vector<T> c(N + 1, T{0});
  for (std::uint64_t d = 1; d <= N; ++d) {
    if (a[d] == T{0}) continue;
    for (std::uint64_t m = 1, n = d; n <= N; ++m, n += d) c[n] = detail::mul_add(c[n], a[d], b[m]);
  }
  return c;
}

// b with a * b = identity up to N; requires a_1 = 1.
template <class T>
std::vector<T> dirichlet_invert(std::span<const T> a, std::uint64_t N) {
  detail::require_length(a.size(), N, "dirichlet_invert");
  if (N >= 1 && a[1] != T{1}) throw DomainError("dirichlet_invert: a_1 must be 1");
  std::vector<T> acc(N + 1, T{0});
  std::vector<T> b(N + 1, T{0});
  for (std::uint64_t n = 1; n <= N; ++n) {
    b[n] = (n == 1) ? T{1} : T{0} - acc[n];
    if (b[n] == T{0}) continue;
    for (std::uint64_t d = 2, m = 2 * n; m <= N; ++d, m += n) acc[m] = detail::mul_add(acc[m], a[d], b[n]);
  }
  return b;
}

// b_{k^2} = a_k, zero off the squares: the coefficients of f(2s).
template <class T>
std::vector<T> dilate_to_2s(std::span<const T> a, std::uint64_t N) {
  std::vector<T> b(N + 1, T{0});
  for (std::uint64_t k = 1; k * k <= N; ++k) {
    detail::require_length(a.size(), k, "dilate_to_2s");
    b[k * k] = a[k];
  }
  return b;
}

}  // namespace dedekind
