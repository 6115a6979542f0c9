#pragma once

// Truncated Perron formula with an explicit two-term error budget, applied
// to finite Dirichlet polynomials so every term is exactly computable:
//
//   sum_{n <= x} a_n = (1/2 pi i) int_{b-iT}^{b+iT} f(s) x^s / s ds
//                      + O(sum_{x - x/H < n <= x + x/H} |a_n|)
//                      + O(x^b H B(b) / T),     B(b) = sum |a_n| n^-b.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "dedekind/dirichlet.hpp"
#include "dedekind/sums.hpp"

namespace dedekind {

// Multiplies the summed error terms before comparing with the observed
// error. The absolute constants of the truncation bound are not explicit;
// 10 is a calibration choice.
inline constexpr double kPerronSafetyFactor = 10.0;

struct PerronConfig {
  double x = 0;                // >= 2
  double b = 0;                // > 1
  double T = 0;                // >= 2
  double H = 0;                // >= 2
  std::uint64_t N = 0;         // coefficient cutoff, >= 2x
  double quadrature_step = 0;  // <= min(0.5, 1/log x)
};

// b = 1 + 1/log x, T = exp(sqrt(log x)), H = sqrt(T), N = ceil(2x),
// step = min(0.5, 1/log x).
PerronConfig default_perron_config(double x);
void validate(const PerronConfig& config);

// sum_{n <= N} a_n n^-s, 1-indexed coefficients.
std::complex<double> eval_dirichlet_polynomial(std::span<const double> coeffs, std::complex<double> s);

struct QuadratureResult {
  double value = 0;           // (1/2pi) int_{-T}^{T} g(t) dt, real part
  double imag_residue = 0;    // imaginary part left by the t = 0 node
  double error_estimate = 0;  // |T_{h/2} - T_h| plus a roundoff floor
  std::size_t nodes = 0;
};

// Integrand g(t) = f(b+it) x^{b+it} / (b+it). Composite trapezoid on [0, T]
// at steps h and h/2 (folded by conjugate symmetry; coefficients are real),
// combined by one Richardson step.
QuadratureResult vertical_line_integral(std::span<const double> coeffs, double x, double b, double T,
                                        double quadrature_step);

struct PerronReport {
  PerronConfig config;
  SeriesKind kind;
  std::string field_hash;
  double contour_estimate = 0;
  double exact_partial_sum = 0;
  double neighborhood_term = 0;
  double tail_term = 0;
  double B_at_b = 0;
  double quadrature_error = 0;
  double imag_residue = 0;
  double observed_error = 0;
  double budget = 0;  // neighborhood + tail + quadrature, before the safety factor
  bool pass = false;
};

PerronReport perron_truncated(SeriesKind kind, const ArithmeticContext& ctx, const PerronConfig& config);
PerronReport perron_truncated(SeriesKind kind, const FieldSpec& field, const PerronConfig& config);

// Classical route at abscissa b (2 by default): the same contour integral
// with the rigorous per-term bound sum |a_n| (x/n)^b min(1, 1/(T |log(x/n)|)).
struct ClassicalPerronReport {
  double x = 0, b = 0, T = 0;
  double contour_estimate = 0;
  double exact_partial_sum = 0;
  double truncation_bound = 0;
  double quadrature_error = 0;
  double observed_error = 0;
  double budget = 0;
  bool pass = false;
};
ClassicalPerronReport classical_perron(SeriesKind kind, const ArithmeticContext& ctx, double x, double T,
                                       double b = 2.0);

// Randomized configs: x a half-integer in [20, 500], T log-uniform in
// [1e3, 1e5], H log-uniform in [10, sqrt T], defaults for b, N and step.
std::vector<PerronConfig> random_perron_configs(std::size_t count, std::uint64_t seed);

}  // namespace dedekind
