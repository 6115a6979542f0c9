#pragma once

// Partial sums of the aggregated coefficients, residue and Delta estimation,
// log-log exponent fits, and verifiers for the exact summation identities
// relating M_K, H_K, L_K, psi_K and I.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "dedekind/dirichlet.hpp"
#include "dedekind/field.hpp"
#include "dedekind/ideals.hpp"

namespace dedekind {

// Owns a field's splitting table up to `bound` and lazily built coefficient
// tables. Not safe for concurrent first use of table(); share only after the
// needed tables are built.
class ArithmeticContext {
 public:
  ArithmeticContext(FieldSpec field, std::uint64_t bound);
  ArithmeticContext(FieldSpec field, SplittingTable splitting);

  const FieldSpec& field() const { return field_; }
  const SplittingTable& splitting() const { return splitting_; }
  std::uint64_t bound() const { return splitting_.bound(); }
  const CoeffTable& table(SeriesKind kind) const;

 private:
  FieldSpec field_;
  SplittingTable splitting_;
  mutable std::map<SeriesKind, std::unique_ptr<CoeffTable>> tables_;
};

enum class SumKind {
  Mobius,         // M_K
  Liouville,      // L_K
  Psi,            // psi_K
  IdealCount,     // I
  MobiusLog,      // H_K = sum mu_K(a) log Na
  SumReciprocal,  // sum 1/Na
  SumLog,         // sum log Na
  SumDivisors,    // sum d(a)
};

inline constexpr SumKind kAllSumKinds[] = {SumKind::Mobius,     SumKind::Liouville,     SumKind::Psi,
                                           SumKind::IdealCount, SumKind::MobiusLog,     SumKind::SumReciprocal,
                                           SumKind::SumLog,     SumKind::SumDivisors};

std::string_view to_string(SumKind kind);
SumKind parse_sum_kind(std::string_view name);
bool is_exact_sum(SumKind kind);

struct PartialSumSeries {
  SumKind kind;
  std::string field_hash;
  std::vector<double> checkpoints;
  std::vector<std::int64_t> exact;  // filled for exact kinds only
  std::vector<double> values;       // always filled
};

// Sums over n <= floor(x) at each checkpoint (sorted, >= 1) in one pass.
PartialSumSeries partial_sums(const ArithmeticContext& ctx, SumKind kind, std::span<const double> checkpoints);
PartialSumSeries partial_sums(const FieldSpec& field, SumKind kind, std::span<const double> checkpoints);

// x_min * ratio^k up to x_max, with x_max appended when the grid misses it.
// Points within 1e-9 relative of an integer are snapped to it.
std::vector<double> geometric_grid(double x_min, double x_max, double ratio);
inline const double kDefaultGridRatio = std::pow(10.0, 0.25);

// c = 2^r1 (2 pi)^r2 h R / (w sqrt|d_K|). Throws ConfigError when any
// invariant is missing.
double residue_from_formula(const FieldInvariants& invariants);
bool has_complete_invariants(const FieldInvariants& invariants);

struct ResidueEstimate {
  double c_hat = 0;
  double delta_hat = 0;
  std::optional<double> c_formula;
  std::uint64_t x_used = 0;
};

// Least-squares fit of sum_{Na <= x} 1/Na = c log x + Delta over the grid
// [x_max/100, x_max] with ratio 10^(1/4).
ResidueEstimate estimate_residue_and_delta(const ArithmeticContext& ctx, std::uint64_t x_max);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double x_min = 0;
  double x_max = 0;
  std::size_t n_points = 0;
  std::size_t dropped_zeros = 0;
};

// Unweighted least squares of log|r| against log x; zero residuals are
// dropped. Throws DomainError with fewer than 3 usable points.
ExponentFit fit_error_exponent(std::span<const double> xs, std::span<const double> residuals);

// The constants the identity verifiers and residual diagnostics run with,
// and where they came from ("formula" or "estimate").
struct FieldConstants {
  double c = 0;
  double delta = 0;
  std::string c_source;
  std::string delta_source;
  std::uint64_t delta_x = 0;
};
// c from the residue formula when the invariants allow it, else estimated;
// Delta always estimated at delta_x.
FieldConstants resolve_constants(const ArithmeticContext& ctx, std::uint64_t delta_x);

struct MertensBridgeReport {
  double x = 0;
  double lhs = 0;  // |M_K(x) log x - H_K(x)|
  double rhs = 0;  // sum_{Na <= x} log(x/Na)
  bool pass = false;
};
MertensBridgeReport verify_mertens_bridge(const ArithmeticContext& ctx, double x);

struct JIdentityReport {
  double x = 0;
  double c = 0;
  double sum_convolution = 0;  // sum J(n) via mu_K * (1 - c Lambda_K)
  double sum_closed_form = 0;  // 1 + c sum mu(n) log n
  double target = 0;           // 1 + c H_K(x)
  double mobius_log_sum = 0;   // H_K(x)
  double pointwise_max = 0;    // max_n |J_conv(n) - J_closed(n)|
  double max_abs_discrepancy = 0;
};
JIdentityReport verify_J_identity(const ArithmeticContext& ctx, double x, double c);

template <class T>
struct HyperbolaResult {
  T hyperbola;
  T direct;
};

namespace detail {

template <class T>
class Accumulator {
 public:
  void add(T v) {
    if constexpr (std::is_floating_point_v<T>)
      sum_ += v;
    else
      value_ = checked_add(value_, v);
  }
  T value() const {
    if constexpr (std::is_floating_point_v<T>)
      return sum_.value();
    else
      return value_;
  }

 private:
  T value_{0};
  CompensatedSum sum_;
};

template <class T>
T scaled(T a, T b) {
  if constexpr (std::is_floating_point_v<T>)
    return a * b;
  else
    return checked_mul(a, b);
}

}  // namespace detail

// Both sides of sum_{nm <= x} f_n g_m = sum_{n <= alpha} f_n G(x/n)
// + sum_{m <= beta} g_m F(x/m) - F(alpha) G(beta), with alpha beta = x.
// f and g are 1-indexed arrays covering 1..x.
template <class T>
HyperbolaResult<T> hyperbola_sum(std::span<const T> f, std::span<const T> g, std::uint64_t x, double alpha) {
  if (x < 1) throw DomainError("hyperbola_sum: x must be >= 1");
  if (!(alpha >= 1.0) || alpha > static_cast<double>(x)) throw DomainError("hyperbola_sum: alpha must lie in [1, x]");
  if (f.size() < x + 1 || g.size() < x + 1) throw DomainError("hyperbola_sum: arrays must cover 1..x");

  std::vector<T> F(x + 1, T{0}), G(x + 1, T{0});
  {
    detail::Accumulator<T> fa, ga;
    for (std::uint64_t n = 1; n <= x; ++n) {
      fa.add(f[n]);
      ga.add(g[n]);
      F[n] = fa.value();
      G[n] = ga.value();
    }
  }
  const double beta = static_cast<double>(x) / alpha;
  auto floor_index = [x](double v) {
    auto k = static_cast<std::uint64_t>(std::floor(v * (1 + 1e-15)));
    return k > x ? x : k;
  };
  const std::uint64_t a_max = floor_index(alpha);
  std::uint64_t b_max = floor_index(beta);
  // Exactness needs a_max * b_max <= x < (a_max + 1)(b_max + 1).
  while (b_max > 0 && a_max * b_max > x) --b_max;
  while ((a_max + 1) * (b_max + 1) <= x) ++b_max;

  detail::Accumulator<T> hyper;
  for (std::uint64_t n = 1; n <= a_max; ++n) hyper.add(detail::scaled(f[n], G[x / n]));
  for (std::uint64_t m = 1; m <= b_max; ++m) hyper.add(detail::scaled(g[m], F[x / m]));
  hyper.add(T{0} - detail::scaled(F[a_max], G[b_max]));

  detail::Accumulator<T> direct;
  for (std::uint64_t n = 1; n <= x; ++n) {
    if (f[n] == T{0}) continue;
    for (std::uint64_t m = 1; m <= x / n; ++m) direct.add(detail::scaled(f[n], g[m]));
  }
  return {hyper.value(), direct.value()};
}

struct PsiDecompositionReport {
  double x = 0;
  double c = 0;
  double delta = 0;
  double A = 0;  // 2 Delta / c
  double psi = 0;
  double rhs = 0;  // I(x)/c - double_sum - A
  double double_sum = 0;
  double double_sum_direct = 0;
  double discrepancy = 0;
  double relative_to_x = 0;
};
// psi_K(x) = I(x)/c - sum_{Na Nb <= x} mu_K(b) f(a) - A with
// f(a) = d(a)/c - log Na - A; double sum via the hyperbola split at sqrt(x).
PsiDecompositionReport verify_psi_decomposition(const ArithmeticContext& ctx, double x, double c, double delta);

struct LambdaFromMuReport {
  double x = 0;
  std::int64_t lhs = 0;  // L_K(x)
  std::int64_t rhs = 0;  // sum_{N b^2 <= x} M_K(x / N b^2)
  bool pass = false;
};
LambdaFromMuReport verify_lambda_from_mu(const ArithmeticContext& ctx, double x);

// Residual curves for the asymptotic laws, evaluated on a checkpoint grid.
enum class ResidualKind {
  Weber,         // I(x) - c x
  Reciprocal,    // sum 1/Na - c log x - Delta
  SumLog,        // sum log Na - (c x log x - c x)
  SumDivisors,   // sum d(a) - (c^2 x log x + (2 c Delta - c^2) x)
  Mertens,       // M_K(x)
  Liouville,     // L_K(x)
  PsiTrend,      // psi_K(x)/x - 1
  MertensDecay,  // M_K(x)/x
};

std::string_view to_string(ResidualKind kind);
ResidualKind parse_residual_kind(std::string_view name);

struct ResidualSeries {
  ResidualKind kind;
  std::vector<double> xs;
  std::vector<double> residuals;
};
ResidualSeries residual_series(const ArithmeticContext& ctx, ResidualKind kind, std::span<const double> grid,
                               const FieldConstants& constants);

}  // namespace dedekind
