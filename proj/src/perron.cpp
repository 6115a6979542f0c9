#include "dedekind/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "dedekind/parallel.hpp"

namespace dedekind {

namespace {

constexpr std::size_t kChunkNodes = 1024;

double max_step(double x) { return std::min(0.5, 1.0 / std::log(x)); }

SumKind matching_sum(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Zeta: return SumKind::IdealCount;
    case SeriesKind::InverseZeta: return SumKind::Mobius;
    case SeriesKind::LiouvilleRatio: return SumKind::Liouville;
    case SeriesKind::NegLogDerivative: return SumKind::Psi;
    case SeriesKind::ZetaSquared: return SumKind::SumDivisors;
  }
  return SumKind::IdealCount;
}

double uniform(SplitMix64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

PerronConfig default_perron_config(double x) {
  if (!(x >= 2.0)) throw DomainError("default_perron_config: x must be >= 2");
  PerronConfig c;
  c.x = x;
  c.b = 1.0 + 1.0 / std::log(x);
  c.T = std::max(2.0, std::exp(std::sqrt(std::log(x))));
  c.H = std::max(2.0, std::sqrt(c.T));
  c.N = static_cast<std::uint64_t>(std::ceil(2.0 * x));
  c.quadrature_step = max_step(x);
  return c;
}

void validate(const PerronConfig& c) {
  if (!(c.x >= 2.0)) throw DomainError("PerronConfig: x must be >= 2");
  if (!(c.b > 1.0)) throw DomainError("PerronConfig: b must be > 1");
  if (!(c.T >= 2.0)) throw DomainError("PerronConfig: T must be >= 2");
  if (!(c.H >= 2.0)) throw DomainError("PerronConfig: H must be >= 2");
  if (static_cast<double>(c.N) < 2.0 * c.x) throw DomainError("PerronConfig: N must be >= 2x");
  if (!(c.quadrature_step > 0.0) || c.quadrature_step > max_step(c.x))
    throw DomainError("PerronConfig: quadrature_step must lie in (0, min(0.5, 1/log x)]");
}

std::complex<double> eval_dirichlet_polynomial(std::span<const double> coeffs, std::complex<double> s) {
  CompensatedSum re, im;
  for (std::size_t n = 1; n < coeffs.size(); ++n) {
    if (coeffs[n] == 0.0) continue;
    const std::complex<double> term = coeffs[n] * std::exp(-s * std::log(static_cast<double>(n)));
    re += term.real();
    im += term.imag();
  }
  return {re.value(), im.value()};
}

QuadratureResult vertical_line_integral(std::span<const double> coeffs, double x, double b, double T,
                                        double quadrature_step) {
  if (!(x > 1.0)) throw DomainError("vertical_line_integral: x must be > 1");
  if (!(T > 0.0)) throw DomainError("vertical_line_integral: T must be > 0");
  if (!(quadrature_step > 0.0) || quadrature_step > max_step(x))
    throw DomainError(fmt::format("vertical_line_integral: step {} exceeds min(0.5, 1/log x) = {}", quadrature_step,
                                  max_step(x)));

  // Term n contributes c_n exp(i t l_n) with c_n = a_n (x/n)^b, l_n = log(x/n).
  std::vector<double> amp, freq;
  double amp_total = 0.0;
  for (std::size_t n = 1; n < coeffs.size(); ++n) {
    if (coeffs[n] == 0.0) continue;
    const double l = std::log(x / static_cast<double>(n));
    amp.push_back(coeffs[n] * std::exp(b * l));
    freq.push_back(l);
    amp_total += std::fabs(amp.back());
  }

  const auto coarse_intervals = static_cast<std::size_t>(std::ceil(T / quadrature_step));
  const double h = T / static_cast<double>(coarse_intervals);
  const double delta = h / 2;
  const std::size_t last = 2 * coarse_intervals;  // fine nodes 0..last
  const std::size_t chunks = (last + 1 + kChunkNodes - 1) / kChunkNodes;

  struct ChunkSums {
    double fine = 0, coarse = 0, imag0 = 0;
  };
  std::vector<ChunkSums> partial(chunks);
  const std::size_t terms = amp.size();

  parallel_for(chunks, [&](std::size_t chunk) {
    const std::size_t j0 = chunk * kChunkNodes;
    const std::size_t j1 = std::min(j0 + kChunkNodes, last + 1);
    std::vector<double> wr(terms), wi(terms), zr(terms), zi(terms);
    const double t0 = static_cast<double>(j0) * delta;
    for (std::size_t k = 0; k < terms; ++k) {
      wr[k] = amp[k] * std::cos(freq[k] * t0);
      wi[k] = amp[k] * std::sin(freq[k] * t0);
      zr[k] = std::cos(freq[k] * delta);
      zi[k] = std::sin(freq[k] * delta);
    }
    CompensatedSum fine, coarse;
    for (std::size_t j = j0; j < j1; ++j) {
      double sr0 = 0, si0 = 0, sr1 = 0, si1 = 0;
      std::size_t k = 0;
      for (; k + 1 < terms; k += 2) {
        sr0 += wr[k];
        si0 += wi[k];
        sr1 += wr[k + 1];
        si1 += wi[k + 1];
        const double r0 = wr[k] * zr[k] - wi[k] * zi[k];
        const double i0 = wr[k] * zi[k] + wi[k] * zr[k];
        const double r1 = wr[k + 1] * zr[k + 1] - wi[k + 1] * zi[k + 1];
        const double i1 = wr[k + 1] * zi[k + 1] + wi[k + 1] * zr[k + 1];
        wr[k] = r0;
        wi[k] = i0;
        wr[k + 1] = r1;
        wi[k + 1] = i1;
      }
      for (; k < terms; ++k) {
        sr0 += wr[k];
        si0 += wi[k];
        const double r0 = wr[k] * zr[k] - wi[k] * zi[k];
        wi[k] = wr[k] * zi[k] + wi[k] * zr[k];
        wr[k] = r0;
      }
      const std::complex<double> numer(sr0 + sr1, si0 + si1);
      const double t = static_cast<double>(j) * delta;
      const std::complex<double> g = numer / std::complex<double>(b, t);
      const double weight = (j == 0 || j == last) ? 0.5 : 1.0;
      fine += weight * g.real();
      if (j % 2 == 0) coarse += weight * g.real();
      if (j == 0) partial[chunk].imag0 = g.imag();
    }
    partial[chunk].fine = fine.value();
    partial[chunk].coarse = coarse.value();
  });

  CompensatedSum fine, coarse;
  for (const auto& p : partial) {
    fine += p.fine;
    coarse += p.coarse;
  }
  const double fine_int = delta * fine.value();
  const double coarse_int = h * coarse.value();
  const double pi = std::numbers::pi;

  QuadratureResult r;
  r.nodes = last + 1;
  r.value = (fine_int + (fine_int - coarse_int) / 3.0) / pi;
  const double roundoff = h / pi * std::sqrt(static_cast<double>(r.nodes)) *
                          static_cast<double>(kChunkNodes + terms) * std::numeric_limits<double>::epsilon() *
                          amp_total / b;
  r.error_estimate = std::fabs(fine_int - coarse_int) / pi + roundoff;
  r.imag_residue = h / (2 * pi) * std::fabs(partial.empty() ? 0.0 : partial[0].imag0);
  return r;
}

PerronReport perron_truncated(SeriesKind kind, const ArithmeticContext& ctx, const PerronConfig& config) {
  validate(config);
  if (config.N > ctx.bound())
    throw DomainError(fmt::format("perron_truncated: N = {} exceeds context bound {}", config.N, ctx.bound()));
  const auto all = ctx.table(kind).as_reals();
  const std::span<const double> a = std::span(all).first(config.N + 1);

  PerronReport r;
  r.config = config;
  r.kind = kind;
  r.field_hash = ctx.field().content_hash();

  const auto q = vertical_line_integral(a, config.x, config.b, config.T, config.quadrature_step);
  r.contour_estimate = q.value;
  r.quadrature_error = q.error_estimate;
  r.imag_residue = q.imag_residue;

  const double grid[] = {config.x};
  r.exact_partial_sum = partial_sums(ctx, matching_sum(kind), grid).values[0];

  const double lo = config.x - config.x / config.H;
  const double hi = config.x + config.x / config.H;
  CompensatedSum neighborhood, B;
  for (std::uint64_t n = 1; n <= config.N; ++n) {
    const double v = std::fabs(a[n]);
    if (v == 0.0) continue;
    const double dn = static_cast<double>(n);
    if (dn > lo && dn <= hi) neighborhood += v;
    B += v * std::pow(dn, -config.b);
  }
  r.neighborhood_term = neighborhood.value();
  r.B_at_b = B.value();
  r.tail_term = std::pow(config.x, config.b) * config.H * r.B_at_b / config.T;
  r.observed_error = std::fabs(r.contour_estimate - r.exact_partial_sum);
  r.budget = r.neighborhood_term + r.tail_term + r.quadrature_error;
  r.pass = r.observed_error <= kPerronSafetyFactor * r.budget;
  return r;
}

PerronReport perron_truncated(SeriesKind kind, const FieldSpec& field, const PerronConfig& config) {
  validate(config);
  ArithmeticContext ctx(field, config.N);
  return perron_truncated(kind, ctx, config);
}

ClassicalPerronReport classical_perron(SeriesKind kind, const ArithmeticContext& ctx, double x, double T, double b) {
  if (!(x >= 2.0) || !(T >= 2.0) || !(b > 1.0)) throw DomainError("classical_perron: need x >= 2, T >= 2, b > 1");
  const auto N = static_cast<std::uint64_t>(std::ceil(2.0 * x));
  if (N > ctx.bound()) throw DomainError("classical_perron: context does not cover 2x");
  const auto all = ctx.table(kind).as_reals();
  const std::span<const double> a = std::span(all).first(N + 1);

  ClassicalPerronReport r;
  r.x = x;
  r.b = b;
  r.T = T;
  const auto q = vertical_line_integral(a, x, b, T, max_step(x));
  r.contour_estimate = q.value;
  r.quadrature_error = q.error_estimate;
  const double grid[] = {x};
  r.exact_partial_sum = partial_sums(ctx, matching_sum(kind), grid).values[0];

  CompensatedSum bound;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (a[n] == 0.0) continue;
    const double y = x / static_cast<double>(n);
    const double l = std::fabs(std::log(y));
    const double factor = l == 0.0 ? 1.0 : std::min(1.0, 1.0 / (T * l));
    bound += std::fabs(a[n]) * std::pow(y, b) * factor;
  }
  r.truncation_bound = bound.value();
  r.observed_error = std::fabs(r.contour_estimate - r.exact_partial_sum);
  r.budget = r.truncation_bound + r.quadrature_error;
  r.pass = r.observed_error <= r.budget;
  return r;
}

std::vector<PerronConfig> random_perron_configs(std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<PerronConfig> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = std::floor(20.0 + 480.0 * uniform(rng)) + 0.5;
    PerronConfig c = default_perron_config(x);
    c.T = std::pow(10.0, 3.0 + 2.0 * uniform(rng));
    const double log_h_max = std::log10(std::sqrt(c.T));
    c.H = std::pow(10.0, 1.0 + (log_h_max - 1.0) * uniform(rng));
    out.push_back(c);
  }
  return out;
}

}  // namespace dedekind
