#include "dedekind/sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace dedekind {

ArithmeticContext::ArithmeticContext(FieldSpec field, std::uint64_t bound)
    : field_(std::move(field)), splitting_(SplittingTable::build(field_, bound)) {
  if (bound < 1) throw DomainError("ArithmeticContext: bound must be >= 1");
}

ArithmeticContext::ArithmeticContext(FieldSpec field, SplittingTable splitting)
    : field_(std::move(field)), splitting_(std::move(splitting)) {
  if (splitting_.field_hash() != field_.content_hash())
    throw DomainError("ArithmeticContext: splitting table belongs to a different field");
}

const CoeffTable& ArithmeticContext::table(SeriesKind kind) const {
  auto& slot = tables_[kind];
  if (!slot) slot = std::make_unique<CoeffTable>(coefficients(kind, splitting_, splitting_.bound()));
  return *slot;
}

std::string_view to_string(SumKind kind) {
  switch (kind) {
    case SumKind::Mobius: return "M_K";
    case SumKind::Liouville: return "L_K";
    case SumKind::Psi: return "PSI_K";
    case SumKind::IdealCount: return "I";
    case SumKind::MobiusLog: return "H_K";
    case SumKind::SumReciprocal: return "SUM_RECIP";
    case SumKind::SumLog: return "SUM_LOG";
    case SumKind::SumDivisors: return "SUM_DIV";
  }
  return "?";
}

SumKind parse_sum_kind(std::string_view name) {
  for (SumKind k : kAllSumKinds)
    if (name == to_string(k)) return k;
  throw DomainError(fmt::format("unknown sum kind '{}'", name));
}

bool is_exact_sum(SumKind kind) {
  return kind == SumKind::Mobius || kind == SumKind::Liouville || kind == SumKind::IdealCount ||
         kind == SumKind::SumDivisors;
}

namespace {

SeriesKind source_series(SumKind kind) {
  switch (kind) {
    case SumKind::Mobius:
    case SumKind::MobiusLog: return SeriesKind::InverseZeta;
    case SumKind::Liouville: return SeriesKind::LiouvilleRatio;
    case SumKind::Psi: return SeriesKind::NegLogDerivative;
    case SumKind::SumDivisors: return SeriesKind::ZetaSquared;
    default: return SeriesKind::Zeta;
  }
}

std::uint64_t floor_x(double x) { return static_cast<std::uint64_t>(std::floor(x)); }

void require_covered(const ArithmeticContext& ctx, double x, const char* what) {
  if (!(x >= 1.0)) throw DomainError(fmt::format("{}: x must be >= 1", what));
  if (floor_x(x) > ctx.bound())
    throw DomainError(fmt::format("{}: x = {} exceeds context bound {}", what, x, ctx.bound()));
}

}  // namespace

PartialSumSeries partial_sums(const ArithmeticContext& ctx, SumKind kind, std::span<const double> checkpoints) {
  PartialSumSeries out{kind, ctx.field().content_hash(), {checkpoints.begin(), checkpoints.end()}, {}, {}};
  if (checkpoints.empty()) return out;
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw DomainError("partial_sums: checkpoints must be sorted ascending");
  require_covered(ctx, checkpoints.front(), "partial_sums");
  require_covered(ctx, checkpoints.back(), "partial_sums");

  const CoeffTable& table = ctx.table(source_series(kind));
  const std::uint64_t last = floor_x(checkpoints.back());
  std::size_t next = 0;

  if (is_exact_sum(kind)) {
    const auto a = table.integers();
    std::int64_t acc = 0;
    for (std::uint64_t n = 1; n <= last; ++n) {
      acc = checked_add(acc, a[n]);
      while (next < checkpoints.size() && floor_x(checkpoints[next]) == n) {
        out.exact.push_back(acc);
        out.values.push_back(static_cast<double>(acc));
        ++next;
      }
    }
    return out;
  }

  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= last; ++n) {
    const double a = table.value(n);
    if (a != 0.0) {
      const double dn = static_cast<double>(n);
      switch (kind) {
        case SumKind::Psi: acc += a; break;
        case SumKind::MobiusLog:
        case SumKind::SumLog: acc += a * std::log(dn); break;
        case SumKind::SumReciprocal: acc += a / dn; break;
        default: break;
      }
    }
    while (next < checkpoints.size() && floor_x(checkpoints[next]) == n) {
      out.values.push_back(acc.value());
      ++next;
    }
  }
  return out;
}

PartialSumSeries partial_sums(const FieldSpec& field, SumKind kind, std::span<const double> checkpoints) {
  const std::uint64_t bound = checkpoints.empty() ? 1 : std::max<std::uint64_t>(1, floor_x(checkpoints.back()));
  ArithmeticContext ctx(field, bound);
  return partial_sums(ctx, kind, checkpoints);
}

std::vector<double> geometric_grid(double x_min, double x_max, double ratio) {
  if (!(x_min >= 1.0) || !(x_max >= x_min) || !(ratio > 1.0))
    throw DomainError("geometric_grid: need 1 <= x_min <= x_max and ratio > 1");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    double x = x_min * std::pow(ratio, k);
    const double r = std::round(x);
    if (std::fabs(x - r) <= 1e-9 * x) x = r;
    if (x > x_max * (1 + 1e-12)) break;
    out.push_back(std::min(x, x_max));
  }
  if (out.back() < x_max) out.push_back(x_max);
  return out;
}

bool has_complete_invariants(const FieldInvariants& inv) {
  return inv.r1 && inv.r2 && inv.h && inv.regulator && inv.w && inv.disc;
}

double residue_from_formula(const FieldInvariants& inv) {
  if (!has_complete_invariants(inv))
    throw ConfigError("residue_from_formula: invariants r1, r2, h, R, w, d_K are all required");
  const double two_pi = 2.0 * std::numbers::pi;
  return std::pow(2.0, *inv.r1) * std::pow(two_pi, *inv.r2) * static_cast<double>(*inv.h) * *inv.regulator /
         (*inv.w * std::sqrt(std::fabs(static_cast<double>(*inv.disc))));
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw DomainError("fit_line: need >= 2 aligned points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw DomainError("fit_line: degenerate x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

ResidueEstimate estimate_residue_and_delta(const ArithmeticContext& ctx, std::uint64_t x_max) {
  if (x_max < 100) throw DomainError("estimate_residue_and_delta: x_max must be >= 100");
  const auto grid = geometric_grid(static_cast<double>(x_max) / 100.0, static_cast<double>(x_max), kDefaultGridRatio);
  const auto sums = partial_sums(ctx, SumKind::SumReciprocal, grid);
  std::vector<double> logs;
  for (double x : grid) logs.push_back(std::log(x));
  const LineFit fit = fit_line(logs, sums.values);
  ResidueEstimate est;
  est.c_hat = fit.slope;
  est.delta_hat = fit.intercept;
  est.x_used = x_max;
  if (has_complete_invariants(ctx.field().invariants())) est.c_formula = residue_from_formula(ctx.field().invariants());
  return est;
}

ExponentFit fit_error_exponent(std::span<const double> xs, std::span<const double> residuals) {
  if (xs.size() != residuals.size()) throw DomainError("fit_error_exponent: xs and residuals differ in length");
  std::vector<double> lx, ly;
  ExponentFit fit;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = std::fabs(residuals[i]);
    if (r == 0.0) {
      ++fit.dropped_zeros;
      continue;
    }
    if (!(xs[i] > 0.0)) throw DomainError("fit_error_exponent: x values must be positive");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(r));
  }
  if (lx.size() < 3) throw DomainError("fit_error_exponent: fewer than 3 non-zero residuals");
  const LineFit line = fit_line(lx, ly);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.x_min = std::exp(*std::min_element(lx.begin(), lx.end()));
  fit.x_max = std::exp(*std::max_element(lx.begin(), lx.end()));
  fit.n_points = lx.size();
  return fit;
}

FieldConstants resolve_constants(const ArithmeticContext& ctx, std::uint64_t delta_x) {
  delta_x = std::min(delta_x, ctx.bound());
  const ResidueEstimate est = estimate_residue_and_delta(ctx, delta_x);
  FieldConstants k;
  if (est.c_formula) {
    k.c = *est.c_formula;
    k.c_source = "formula";
  } else {
    k.c = est.c_hat;
    k.c_source = "estimate";
  }
  k.delta = est.delta_hat;
  k.delta_source = "estimate";
  k.delta_x = delta_x;
  return k;
}

MertensBridgeReport verify_mertens_bridge(const ArithmeticContext& ctx, double x) {
  require_covered(ctx, x, "verify_mertens_bridge");
  const double grid[] = {x};
  const double M = partial_sums(ctx, SumKind::Mobius, grid).values[0];
  const double H = partial_sums(ctx, SumKind::MobiusLog, grid).values[0];
  const double I = partial_sums(ctx, SumKind::IdealCount, grid).values[0];
  const double S = partial_sums(ctx, SumKind::SumLog, grid).values[0];
  MertensBridgeReport r;
  r.x = x;
  r.lhs = std::fabs(M * std::log(x) - H);
  r.rhs = I * std::log(x) - S;
  r.pass = r.lhs <= r.rhs + 1e-9 * (1.0 + std::fabs(r.rhs));
  return r;
}

JIdentityReport verify_J_identity(const ArithmeticContext& ctx, double x, double c) {
  require_covered(ctx, x, "verify_J_identity");
  if (!(c > 0)) throw DomainError("verify_J_identity: c must be positive");
  const std::uint64_t X = floor_x(x);
  const auto mu = ctx.table(SeriesKind::InverseZeta).as_reals();
  const auto zeta = ctx.table(SeriesKind::Zeta).integers();
  const auto lambda = ctx.table(SeriesKind::NegLogDerivative).reals();

  // (1 - c Lambda_K) aggregated by norm: F(n) - c Lambda(n).
  std::vector<double> kernel(X + 1, 0.0);
  for (std::uint64_t n = 1; n <= X; ++n) kernel[n] = static_cast<double>(zeta[n]) - c * lambda[n];
  const auto J = dirichlet_multiply<double>(std::span(mu).first(X + 1), kernel, X);

  CompensatedSum conv, closed, H;
  JIdentityReport r;
  r.x = x;
  r.c = c;
  for (std::uint64_t n = 1; n <= X; ++n) {
    const double mu_log = mu[n] * std::log(static_cast<double>(n));
    const double j_closed = (n == 1) ? 1.0 : c * mu_log;
    conv += J[n];
    closed += j_closed;
    H += mu_log;
    r.pointwise_max = std::max(r.pointwise_max, std::fabs(J[n] - j_closed));
  }
  r.sum_convolution = conv.value();
  r.sum_closed_form = closed.value();
  r.mobius_log_sum = H.value();
  r.target = 1.0 + c * r.mobius_log_sum;
  r.max_abs_discrepancy =
      std::max(std::fabs(r.sum_convolution - r.target), std::fabs(r.sum_closed_form - r.target));
  return r;
}

PsiDecompositionReport verify_psi_decomposition(const ArithmeticContext& ctx, double x, double c, double delta) {
  require_covered(ctx, x, "verify_psi_decomposition");
  if (!(c > 0)) throw DomainError("verify_psi_decomposition: c must be positive");
  const std::uint64_t X = floor_x(x);
  const auto mu = ctx.table(SeriesKind::InverseZeta).as_reals();
  const auto zeta = ctx.table(SeriesKind::Zeta).integers();
  const auto zeta2 = ctx.table(SeriesKind::ZetaSquared).integers();

  PsiDecompositionReport r;
  r.x = x;
  r.c = c;
  r.delta = delta;
  r.A = 2.0 * delta / c;
  std::vector<double> f(X + 1, 0.0);
  for (std::uint64_t n = 1; n <= X; ++n) {
    const double F = static_cast<double>(zeta[n]);
    f[n] = static_cast<double>(zeta2[n]) / c - F * std::log(static_cast<double>(n)) - r.A * F;
  }
  const auto split = hyperbola_sum<double>(f, std::span(mu).first(X + 1), X, std::max(1.0, std::sqrt(static_cast<double>(X))));
  r.double_sum = split.hyperbola;
  r.double_sum_direct = split.direct;

  const double grid[] = {x};
  r.psi = partial_sums(ctx, SumKind::Psi, grid).values[0];
  const double I = partial_sums(ctx, SumKind::IdealCount, grid).values[0];
  r.rhs = I / c - r.double_sum - r.A;
  r.discrepancy = std::fabs(r.psi - r.rhs);
  r.relative_to_x = r.discrepancy / x;
  return r;
}

LambdaFromMuReport verify_lambda_from_mu(const ArithmeticContext& ctx, double x) {
  require_covered(ctx, x, "verify_lambda_from_mu");
  const std::uint64_t X = floor_x(x);
  const auto mu = ctx.table(SeriesKind::InverseZeta).integers();
  const auto lambda = ctx.table(SeriesKind::LiouvilleRatio).integers();
  const auto zeta = ctx.table(SeriesKind::Zeta).integers();

  std::vector<std::int64_t> M(X + 1, 0);
  LambdaFromMuReport r;
  r.x = x;
  for (std::uint64_t n = 1; n <= X; ++n) {
    M[n] = checked_add(M[n - 1], mu[n]);
    r.lhs = checked_add(r.lhs, lambda[n]);
  }
  // Ideals b with N b^2 = k^2 <= x are counted by F(k).
  for (std::uint64_t k = 1; k * k <= X; ++k) r.rhs = checked_add(r.rhs, checked_mul(zeta[k], M[X / (k * k)]));
  r.pass = r.lhs == r.rhs;
  return r;
}

std::string_view to_string(ResidualKind kind) {
  switch (kind) {
    case ResidualKind::Weber: return "weber";
    case ResidualKind::Reciprocal: return "reciprocal";
    case ResidualKind::SumLog: return "sum_log";
    case ResidualKind::SumDivisors: return "sum_div";
    case ResidualKind::Mertens: return "mertens";
    case ResidualKind::Liouville: return "liouville";
    case ResidualKind::PsiTrend: return "psi_trend";
    case ResidualKind::MertensDecay: return "mertens_decay";
  }
  return "?";
}

ResidualKind parse_residual_kind(std::string_view name) {
  for (auto k : {ResidualKind::Weber, ResidualKind::Reciprocal, ResidualKind::SumLog, ResidualKind::SumDivisors,
                 ResidualKind::Mertens, ResidualKind::Liouville, ResidualKind::PsiTrend, ResidualKind::MertensDecay})
    if (name == to_string(k)) return k;
  throw DomainError(fmt::format("unknown residual kind '{}'", name));
}

ResidualSeries residual_series(const ArithmeticContext& ctx, ResidualKind kind, std::span<const double> grid,
                               const FieldConstants& k) {
  ResidualSeries out{kind, {grid.begin(), grid.end()}, {}};
  auto sums = [&](SumKind s) { return partial_sums(ctx, s, grid).values; };
  const double c = k.c;
  std::vector<double> v;
  switch (kind) {
    case ResidualKind::Weber:
      v = sums(SumKind::IdealCount);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * grid[i];
      break;
    case ResidualKind::Reciprocal:
      v = sums(SumKind::SumReciprocal);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * std::log(grid[i]) + k.delta;
      break;
    case ResidualKind::SumLog:
      v = sums(SumKind::SumLog);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * grid[i] * std::log(grid[i]) - c * grid[i];
      break;
    case ResidualKind::SumDivisors:
      v = sums(SumKind::SumDivisors);
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] -= c * c * grid[i] * std::log(grid[i]) + (2 * c * k.delta - c * c) * grid[i];
      break;
    case ResidualKind::Mertens: v = sums(SumKind::Mobius); break;
    case ResidualKind::Liouville: v = sums(SumKind::Liouville); break;
    case ResidualKind::PsiTrend:
      v = sums(SumKind::Psi);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] / grid[i] - 1.0;
      break;
    case ResidualKind::MertensDecay:
      v = sums(SumKind::Mobius);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] /= grid[i];
      break;
  }
  out.residuals = std::move(v);
  return out;
}

}  // namespace dedekind
