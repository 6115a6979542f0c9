#include "cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dedekind/arith.hpp"
#include "dedekind/cache.hpp"
#include "dedekind/dirichlet.hpp"
#include "dedekind/errors.hpp"
#include "dedekind/field.hpp"
#include "dedekind/ideals.hpp"
#include "dedekind/parallel.hpp"
#include "dedekind/perron.hpp"
#include "dedekind/sums.hpp"

namespace dedekind::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Globals {
  std::string field_path;
  std::string out_dir;
  std::string cache_dir;
  std::string format = "csv";
  unsigned threads = 0;
  std::uint64_t seed = 1;
};

// Collects output documents: files under --out (plus a manifest) or, without
// --out, the documents themselves on stdout.
class Output {
 public:
  Output(const Globals& globals, std::ostream& out, std::string command)
      : globals_(globals), out_(out), command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    if (!globals_.out_dir.empty()) fs::create_directories(globals_.out_dir);
  }

  void emit(const std::string& name, const std::string& content) {
    if (globals_.out_dir.empty()) {
      out_ << content;
      return;
    }
    const fs::path path = fs::path(globals_.out_dir) / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << content;
    if (!file) throw Error("cannot write " + path.string());
    files_.push_back(name);
  }

  void note(const std::string& line) {
    if (!globals_.out_dir.empty()) out_ << line << '\n';
  }

  void finish(const FieldSpec& field, Json parameters) {
    if (globals_.out_dir.empty()) return;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json m;
    m["command"] = command_;
    m["tool_version"] = kToolVersion;
    m["field"] = field.name();
    m["field_hash"] = field.content_hash();
    parameters["threads"] = globals_.threads;
    parameters["seed"] = globals_.seed;
    parameters["format"] = globals_.format;
    m["parameters"] = std::move(parameters);
    m["outputs"] = files_;
    m["duration_seconds"] = seconds;
    std::ofstream file(fs::path(globals_.out_dir) / "manifest.json", std::ios::binary | std::ios::trunc);
    file << m.dump(2) << '\n';
  }

 private:
  const Globals& globals_;
  std::ostream& out_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> files_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

bool json_format(const Globals& g) { return g.format == "json"; }

FieldSpec load_field(const Globals& g) {
  if (g.field_path.empty()) throw ConfigError("--field is required");
  return load_field_spec(g.field_path);
}

std::string cache_dir(const Globals& g) {
  if (!g.cache_dir.empty()) return g.cache_dir;
  if (const char* env = std::getenv("DEDEKIND_CACHE_DIR")) return env;
  return {};
}

ArithmeticContext make_context(const Globals& g, const FieldSpec& field, std::uint64_t bound) {
  return ArithmeticContext(field, cached_splitting_table(cache_dir(g), field, bound));
}

std::uint64_t as_bound(double x) {
  if (!(x >= 1.0) || x > 4.0e9) throw DomainError(fmt::format("x = {} out of range [1, 4e9]", x));
  return static_cast<std::uint64_t>(std::floor(x));
}

std::string split_class(const SplittingType& st) {
  if (st.is_ramified()) return "ramified";
  if (st.is_split_completely()) return "split";
  if (st.is_inert()) return "inert";
  return "partial";
}

Json factors_json(const SplittingType& st) {
  Json a = Json::array();
  for (const auto& s : st.factors) a.push_back({s.e, s.f});
  return a;
}

Json fit_json(const std::optional<ExponentFit>& fit) {
  if (!fit) return nullptr;
  return Json{{"slope", fit->slope},       {"intercept", fit->intercept}, {"r_squared", fit->r_squared},
              {"x_min", fit->x_min},       {"x_max", fit->x_max},         {"n_points", fit->n_points},
              {"dropped_zeros", fit->dropped_zeros}};
}

std::optional<ExponentFit> try_fit(const ResidualSeries& s) {
  try {
    return fit_error_exponent(s.xs, s.residuals);
  } catch (const DomainError&) {
    return std::nullopt;  // too few non-zero residuals
  }
}

Json constants_json(const FieldConstants& k) {
  return Json{{"c", k.c}, {"c_source", k.c_source}, {"delta", k.delta}, {"delta_source", k.delta_source},
              {"delta_x", k.delta_x}};
}

Json perron_json(const PerronReport& r) {
  return Json{{"kind", to_string(r.kind)},
              {"x", r.config.x},
              {"b", r.config.b},
              {"T", r.config.T},
              {"H", r.config.H},
              {"N", r.config.N},
              {"quadrature_step", r.config.quadrature_step},
              {"contour_estimate", r.contour_estimate},
              {"exact_partial_sum", r.exact_partial_sum},
              {"neighborhood_term", r.neighborhood_term},
              {"tail_term", r.tail_term},
              {"B_at_b", r.B_at_b},
              {"quadrature_error", r.quadrature_error},
              {"imag_residue", r.imag_residue},
              {"observed_error", r.observed_error},
              {"budget", r.budget},
              {"safety_factor", kPerronSafetyFactor},
              {"pass", r.pass}};
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// ---------------------------------------------------------------- split

int cmd_split(const Globals& g, std::uint64_t p_max, std::ostream& out) {
  const FieldSpec field = load_field(g);
  Output output(g, out, "split");
  Json rows = Json::array();
  std::string csv = "p,class,factors\n";
  for (std::uint64_t p : primes_up_to(p_max)) {
    try {
      const SplittingType st = split_prime(field, p);
      rows.push_back({{"p", p}, {"class", split_class(st)}, {"factors", factors_json(st)}});
      csv += fmt::format("{},{},\"{}\"\n", p, split_class(st), st.to_string());
    } catch (const UnsupportedPrime&) {
      rows.push_back({{"p", p}, {"class", "unsupported"}, {"factors", nullptr}});
      csv += fmt::format("{},unsupported,\n", p);
    }
  }
  if (json_format(g))
    output.emit("split.json", dump(Json{{"field_hash", field.content_hash()}, {"p_max", p_max}, {"rows", rows}}));
  else
    output.emit("split.csv", csv);
  output.finish(field, Json{{"p_max", p_max}});
  return kExitOk;
}

// ---------------------------------------------------------------- coeffs

int cmd_coeffs(const Globals& g, const std::string& kind_name, std::uint64_t N, std::ostream& out) {
  const SeriesKind kind = parse_series_kind(kind_name);
  if (N < 1) throw DomainError("--N must be >= 1");
  const FieldSpec field = load_field(g);
  Output output(g, out, "coeffs");
  const auto ctx = make_context(g, field, N);
  const CoeffTable& table = ctx.table(kind);
  const std::string stem = fmt::format("coeffs-{}", to_string(kind));
  if (json_format(g)) {
    Json values = Json::array();
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (table.is_integer())
        values.push_back(table.integers()[n]);
      else
        values.push_back(table.reals()[n]);
    }
    output.emit(stem + ".json", dump(Json{{"field_hash", field.content_hash()},
                                          {"kind", to_string(kind)},
                                          {"N", N},
                                          {"values", values}}));
  } else {
    std::ostringstream csv;
    write_csv(csv, table);
    output.emit(stem + ".csv", csv.str());
  }
  output.finish(field, Json{{"kind", to_string(kind)}, {"N", N}});
  return kExitOk;
}

// ---------------------------------------------------------------- sums

int cmd_sums(const Globals& g, const std::vector<std::string>& kind_names, double x_min, double x_max, double ratio,
             std::ostream& out) {
  std::vector<SumKind> kinds;
  for (const auto& name : kind_names) kinds.push_back(parse_sum_kind(name));
  const auto grid = geometric_grid(x_min, x_max, ratio);
  const FieldSpec field = load_field(g);
  Output output(g, out, "sums");
  const auto ctx = make_context(g, field, as_bound(x_max));

  std::vector<PartialSumSeries> series;
  for (SumKind k : kinds) series.push_back(partial_sums(ctx, k, grid));

  if (json_format(g)) {
    Json s = Json::object();
    for (const auto& ps : series) {
      if (is_exact_sum(ps.kind))
        s[std::string(to_string(ps.kind))] = ps.exact;
      else
        s[std::string(to_string(ps.kind))] = ps.values;
    }
    output.emit("sums.json", dump(Json{{"field_hash", field.content_hash()}, {"checkpoints", grid}, {"series", s}}));
  } else {
    std::string csv = "x";
    for (SumKind k : kinds) csv += fmt::format(",{}", to_string(k));
    csv += '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += format_real(grid[i]);
      for (const auto& ps : series)
        csv += is_exact_sum(ps.kind) ? fmt::format(",{}", ps.exact[i]) : "," + format_real(ps.values[i]);
      csv += '\n';
    }
    output.emit("sums.csv", csv);
  }
  Json names = Json::array();
  for (SumKind k : kinds) names.push_back(to_string(k));
  output.finish(field, Json{{"kinds", names}, {"x_min", x_min}, {"x_max", x_max}, {"grid_ratio", ratio}});
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyParams {
  std::string suite = "all";
  double identities_x = 1e4;
  double delta_x = 1e5;
  double fit_x_min = 1e3;
  double weber_x_max = 1e6;
  double grh_x_max = 1e7;
  double grid_ratio = kDefaultGridRatio;
  std::size_t perron_configs = 20;
  bool assert_band = false;
};

struct SuiteResult {
  bool pass = true;
  Json report;
};

SuiteResult suite_identities(const Globals& g, const FieldSpec& field, const VerifyParams& vp) {
  const std::uint64_t X = as_bound(vp.identities_x);
  const std::uint64_t delta_x = std::max<std::uint64_t>(as_bound(vp.delta_x), 100);
  const auto ctx = make_context(g, field, std::max(X, delta_x));
  const FieldConstants k = resolve_constants(ctx, delta_x);
  const auto grid = geometric_grid(1, vp.identities_x, vp.grid_ratio);
  const auto zeta = ctx.table(SeriesKind::Zeta).integers();
  const auto mu = ctx.table(SeriesKind::InverseZeta).integers();

  SuiteResult out;
  Json rows = Json::array();
  for (double x : grid) {
    const auto bridge = verify_mertens_bridge(ctx, x);
    const auto J = verify_J_identity(ctx, x, k.c);
    const double J_tol = 1e-9 * (1 + std::fabs(J.mobius_log_sum));
    const bool J_pass = J.max_abs_discrepancy < J_tol;
    const auto lam = verify_lambda_from_mu(ctx, x);
    const auto psi = verify_psi_decomposition(ctx, x, k.c, k.delta);
    const bool psi_pass = psi.relative_to_x < 1e-3;

    const std::uint64_t n = as_bound(x);
    const double alpha = std::sqrt(static_cast<double>(n));
    const auto unit = hyperbola_sum<std::int64_t>(zeta, mu, n, alpha);
    const auto divisors = hyperbola_sum<std::int64_t>(zeta, zeta, n, alpha);
    const double at[] = {x};
    const std::int64_t sum_div = partial_sums(ctx, SumKind::SumDivisors, at).exact[0];
    const bool hyper_pass = unit.hyperbola == 1 && unit.direct == 1 && divisors.hyperbola == sum_div &&
                            divisors.direct == sum_div;

    const bool row_pass = bridge.pass && J_pass && lam.pass && psi_pass && hyper_pass;
    out.pass = out.pass && row_pass;
    rows.push_back(Json{
        {"x", x},
        {"mertens_bridge", {{"lhs", bridge.lhs}, {"rhs", bridge.rhs}, {"pass", bridge.pass}}},
        {"J_identity",
         {{"sum_convolution", J.sum_convolution},
          {"target", J.target},
          {"H_K", J.mobius_log_sum},
          {"pointwise_max", J.pointwise_max},
          {"discrepancy", J.max_abs_discrepancy},
          {"tolerance", J_tol},
          {"pass", J_pass}}},
        {"hyperbola",
         {{"alpha", alpha},
          {"zeta_inv_zeta", {unit.hyperbola, unit.direct}},
          {"zeta_zeta", {divisors.hyperbola, divisors.direct}},
          {"sum_div", sum_div},
          {"pass", hyper_pass}}},
        {"lambda_from_mu", {{"L_K", lam.lhs}, {"rhs", lam.rhs}, {"pass", lam.pass}}},
        {"psi_decomposition",
         {{"A", psi.A},
          {"psi", psi.psi},
          {"rhs", psi.rhs},
          {"double_sum", psi.double_sum},
          {"double_sum_direct", psi.double_sum_direct},
          {"relative_to_x", psi.relative_to_x},
          {"tolerance", 1e-3},
          {"pass", psi_pass}}},
        {"pass", row_pass}});
  }
  out.report = Json{{"suite", "identities"}, {"field_hash", field.content_hash()}, {"constants", constants_json(k)},
                    {"checkpoints", grid}, {"rows", rows}, {"pass", out.pass}};
  return out;
}

SuiteResult suite_weber(const Globals& g, const FieldSpec& field, const VerifyParams& vp, Output& output) {
  const std::uint64_t X = std::max<std::uint64_t>(as_bound(vp.weber_x_max), 100);
  const auto ctx = make_context(g, field, X);
  const FieldConstants k = resolve_constants(ctx, X);
  const ResidueEstimate est = estimate_residue_and_delta(ctx, X);
  const auto grid = geometric_grid(vp.fit_x_min, static_cast<double>(X), vp.grid_ratio);
  const double d = field.degree();
  // Exponent bounds only make sense when the main error term grows.
  const bool asserted = field.degree() >= 2;

  SuiteResult out;
  Json fits = Json::object();
  std::vector<ResidualSeries> curves;
  auto check = [&](ResidualKind kind, std::optional<double> bound) {
    curves.push_back(residual_series(ctx, kind, grid, k));
    const auto fit = try_fit(curves.back());
    Json entry{{"fit", fit_json(fit)}};
    if (bound) {
      const bool pass = fit && fit->slope <= *bound;
      entry["bound"] = *bound;
      entry["asserted"] = asserted;
      entry["pass"] = pass;
      if (asserted) out.pass = out.pass && pass;
    }
    fits[std::string(to_string(kind))] = entry;
  };
  check(ResidualKind::Weber, 1 - 1 / d + 0.1);
  check(ResidualKind::SumLog, 1 - 1 / d + 0.15);
  check(ResidualKind::Reciprocal, std::nullopt);
  check(ResidualKind::SumDivisors, std::nullopt);
  curves.push_back(residual_series(ctx, ResidualKind::PsiTrend, grid, k));

  const double psi_trend = std::fabs(curves.back().residuals.back());
  const bool psi_asserted = X >= 1000000;
  const bool psi_pass = psi_trend <= 0.02;
  if (psi_asserted) out.pass = out.pass && psi_pass;

  Json residue{{"c_hat", est.c_hat}, {"delta_hat", est.delta_hat}, {"x_used", est.x_used}};
  residue["c_formula"] = est.c_formula ? Json(*est.c_formula) : Json(nullptr);
  residue["c_relative_error"] = est.c_formula ? Json(std::fabs(est.c_hat / *est.c_formula - 1)) : Json(nullptr);

  std::string csv = "x,I,weber,reciprocal,sum_log,sum_div,psi_trend\n";
  const auto I = partial_sums(ctx, SumKind::IdealCount, grid).exact;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_real(grid[i]) + fmt::format(",{}", I[i]);
    for (const auto& c : curves) csv += "," + format_real(c.residuals[i]);
    csv += '\n';
  }
  output.emit("weber-curves.csv", csv);

  out.report = Json{{"suite", "weber"},
                    {"field_hash", field.content_hash()},
                    {"degree", field.degree()},
                    {"constants", constants_json(k)},
                    {"residue", residue},
                    {"checkpoints", grid},
                    {"fits", fits},
                    {"psi_trend",
                     {{"x", static_cast<double>(X)},
                      {"value", psi_trend},
                      {"tolerance", 0.02},
                      {"asserted", psi_asserted},
                      {"pass", psi_pass}}},
                    {"pass", out.pass}};
  return out;
}

SuiteResult suite_grh(const Globals& g, const FieldSpec& field, const VerifyParams& vp, Output& output) {
  const std::uint64_t X = as_bound(vp.grh_x_max);
  const auto ctx = make_context(g, field, X);
  const auto grid = geometric_grid(vp.fit_x_min, static_cast<double>(X), vp.grid_ratio);
  const FieldConstants none{};
  const auto M = residual_series(ctx, ResidualKind::Mertens, grid, none);
  const auto L = residual_series(ctx, ResidualKind::Liouville, grid, none);

  SuiteResult out;
  Json fits = Json::object();
  for (const auto* s : {&M, &L}) {
    const auto fit = try_fit(*s);
    const bool in_band = fit && fit->slope >= 0.3 && fit->slope <= 0.6;
    if (vp.assert_band) out.pass = out.pass && in_band;
    fits[std::string(to_string(s->kind))] =
        Json{{"fit", fit_json(fit)}, {"band", {0.3, 0.6}}, {"in_band", in_band}, {"asserted", vp.assert_band}};
  }

  std::string csv = "x,M_K,L_K,M_K_over_x\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    csv += format_real(grid[i]) + fmt::format(",{},{},", static_cast<std::int64_t>(M.residuals[i]),
                                               static_cast<std::int64_t>(L.residuals[i])) +
           format_real(M.residuals[i] / grid[i]) + '\n';
  output.emit("grh-curves.csv", csv);

  out.report = Json{{"suite", "grh-diagnostic"}, {"field_hash", field.content_hash()}, {"checkpoints", grid},
                    {"fits", fits},              {"pass", out.pass}};
  return out;
}

SuiteResult suite_perron(const Globals& g, const FieldSpec& field, const VerifyParams& vp) {
  const auto configs = random_perron_configs(vp.perron_configs, g.seed);
  std::uint64_t bound = 1000;
  for (const auto& c : configs) bound = std::max(bound, c.N);
  const auto ctx = make_context(g, field, bound);

  SuiteResult out;
  auto run = [&](SeriesKind kind, const PerronConfig& c) {
    const auto r = perron_truncated(kind, ctx, c);
    out.pass = out.pass && r.pass;
    return perron_json(r);
  };

  Json sweep = Json::array();
  for (std::size_t i = 0; i < configs.size(); ++i)
    sweep.push_back(run(kAllSeriesKinds[i % std::size(kAllSeriesKinds)], configs[i]));

  Json defaults = Json::array();
  for (SeriesKind kind : kAllSeriesKinds) defaults.push_back(run(kind, default_perron_config(100.5)));

  PerronConfig mertens;
  mertens.x = 100.5;
  mertens.b = 1 + 1 / std::log(mertens.x);
  mertens.T = 1e4;
  mertens.H = 100;
  mertens.N = 1000;
  mertens.quadrature_step = 1 / std::log(mertens.x);
  PerronConfig count = default_perron_config(50.5);
  count.T = 1e4;
  count.H = 100;
  Json known = Json::array({run(SeriesKind::InverseZeta, mertens), run(SeriesKind::Zeta, count)});

  const auto classical = classical_perron(SeriesKind::InverseZeta, ctx, 100.5, 2000);
  out.pass = out.pass && classical.pass;

  out.report = Json{{"suite", "perron"},
                    {"field_hash", field.content_hash()},
                    {"seed", g.seed},
                    {"random_sweep", sweep},
                    {"default_configs", defaults},
                    {"known_values", known},
                    {"classical",
                     {{"x", classical.x},
                      {"b", classical.b},
                      {"T", classical.T},
                      {"contour_estimate", classical.contour_estimate},
                      {"exact_partial_sum", classical.exact_partial_sum},
                      {"truncation_bound", classical.truncation_bound},
                      {"quadrature_error", classical.quadrature_error},
                      {"observed_error", classical.observed_error},
                      {"budget", classical.budget},
                      {"pass", classical.pass}}},
                    {"pass", out.pass}};
  return out;
}

int cmd_verify(const Globals& g, const VerifyParams& vp, std::ostream& out) {
  const std::vector<std::string> known{"identities", "weber", "perron", "grh-diagnostic", "all"};
  if (std::find(known.begin(), known.end(), vp.suite) == known.end())
    throw DomainError(fmt::format("unknown suite '{}'", vp.suite));
  const FieldSpec field = load_field(g);
  Output output(g, out, "verify");
  bool pass = true;
  auto record = [&](const std::string& name, const SuiteResult& r) {
    pass = pass && r.pass;
    output.emit("verify-" + name + ".json", dump(r.report));
    output.note(fmt::format("{}: {}", name, verdict(r.pass)));
  };
  const bool all = vp.suite == "all";
  if (all || vp.suite == "identities") record("identities", suite_identities(g, field, vp));
  if (all || vp.suite == "weber") record("weber", suite_weber(g, field, vp, output));
  if (all || vp.suite == "perron") record("perron", suite_perron(g, field, vp));
  if (all || vp.suite == "grh-diagnostic") record("grh-diagnostic", suite_grh(g, field, vp, output));

  output.finish(field, Json{{"suite", vp.suite},
                            {"identities_x", vp.identities_x},
                            {"delta_x", vp.delta_x},
                            {"fit_x_min", vp.fit_x_min},
                            {"weber_x_max", vp.weber_x_max},
                            {"grh_x_max", vp.grh_x_max},
                            {"grid_ratio", vp.grid_ratio},
                            {"perron_configs", vp.perron_configs},
                            {"assert_band", vp.assert_band},
                            {"pass", pass}});
  return pass ? kExitOk : kExitVerificationFailed;
}

// ---------------------------------------------------------------- fit

int cmd_fit(const Globals& g, const std::string& target, double x_min, double x_max, double ratio, double delta_x,
            std::ostream& out) {
  const ResidualKind kind = parse_residual_kind(target);
  const auto grid = geometric_grid(x_min, x_max, ratio);
  const FieldSpec field = load_field(g);
  Output output(g, out, "fit");
  const std::uint64_t X = as_bound(x_max);
  const std::uint64_t dx = std::max<std::uint64_t>(100, delta_x > 0 ? as_bound(delta_x) : X);
  const auto ctx = make_context(g, field, std::max(X, dx));
  const FieldConstants k = resolve_constants(ctx, dx);
  const auto series = residual_series(ctx, kind, grid, k);
  const ExponentFit fit = fit_error_exponent(series.xs, series.residuals);
  output.emit(fmt::format("fit-{}.json", to_string(kind)),
              dump(Json{{"field_hash", field.content_hash()},
                        {"target", to_string(kind)},
                        {"constants", constants_json(k)},
                        {"checkpoints", grid},
                        {"residuals", series.residuals},
                        {"fit", fit_json(fit)}}));
  output.finish(field, Json{{"target", to_string(kind)},
                            {"x_min", x_min},
                            {"x_max", x_max},
                            {"grid_ratio", ratio},
                            {"delta_x", dx}});
  return kExitOk;
}

// ---------------------------------------------------------------- perron

struct PerronParams {
  std::string kind = "inv_zeta";
  double x = 100.5;
  std::optional<double> b, T, H, step;
  std::optional<std::uint64_t> N;
  std::size_t sweep = 0;
};

int cmd_perron(const Globals& g, const PerronParams& pp, std::ostream& out) {
  const SeriesKind kind = parse_series_kind(pp.kind);
  std::vector<PerronConfig> configs;
  if (pp.sweep > 0) {
    configs = random_perron_configs(pp.sweep, g.seed);
  } else {
    PerronConfig c = default_perron_config(pp.x);
    if (pp.b) c.b = *pp.b;
    if (pp.T) c.T = *pp.T;
    if (pp.H) c.H = *pp.H;
    if (pp.N) c.N = *pp.N;
    if (pp.step) c.quadrature_step = *pp.step;
    validate(c);
    configs.push_back(c);
  }
  const FieldSpec field = load_field(g);
  Output output(g, out, "perron");
  std::uint64_t bound = 1;
  for (const auto& c : configs) bound = std::max(bound, c.N);
  const auto ctx = make_context(g, field, bound);

  bool pass = true;
  std::vector<PerronReport> reports;
  for (const auto& c : configs) {
    reports.push_back(perron_truncated(kind, ctx, c));
    pass = pass && reports.back().pass;
  }
  if (json_format(g)) {
    Json rows = Json::array();
    for (const auto& r : reports) rows.push_back(perron_json(r));
    output.emit("perron.json", dump(Json{{"field_hash", field.content_hash()}, {"reports", rows}}));
  } else {
    std::string csv =
        "kind,x,b,T,H,N,quadrature_step,contour_estimate,exact_partial_sum,neighborhood_term,tail_term,"
        "quadrature_error,imag_residue,observed_error,budget,pass\n";
    for (const auto& r : reports) {
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.kind),
                         format_real(r.config.x), format_real(r.config.b), format_real(r.config.T),
                         format_real(r.config.H), r.config.N, format_real(r.config.quadrature_step),
                         format_real(r.contour_estimate), format_real(r.exact_partial_sum),
                         format_real(r.neighborhood_term), format_real(r.tail_term), format_real(r.quadrature_error),
                         format_real(r.imag_residue), format_real(r.observed_error), format_real(r.budget),
                         r.pass ? "true" : "false");
    }
    output.emit("perron.csv", csv);
  }
  output.finish(field, Json{{"kind", to_string(kind)}, {"configs", configs.size()}, {"sweep", pp.sweep}});
  return pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dedekind zeta partial sums, identities and Perron checks for number fields", "dedekind"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Globals g;
  app.add_option("--field", g.field_path, "Field config (YAML)");
  app.add_option("--out", g.out_dir, "Output directory; stdout when omitted");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--seed", g.seed, "Seed for randomized parameter sweeps");
  app.add_option("--cache-dir", g.cache_dir, "Splitting-table cache (default: $DEDEKIND_CACHE_DIR)");
  app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}));

  std::function<int()> action;

  auto* split = app.add_subcommand("split", "Splitting type of every prime up to --p-max");
  std::uint64_t p_max = 100;
  split->add_option("--p-max", p_max, "Largest prime")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32));
  split->callback([&] { action = [&] { return cmd_split(g, p_max, out); }; });

  auto* coeffs = app.add_subcommand("coeffs", "Aggregated Dirichlet coefficients a_1..a_N");
  std::string coeff_kind = "zeta";
  std::uint64_t coeff_N = 100;
  coeffs->add_option("--kind", coeff_kind, "zeta | inv_zeta | liouville | neg_log_deriv | zeta_squared");
  coeffs->add_option("--N", coeff_N, "Number of coefficients");
  coeffs->callback([&] { action = [&] { return cmd_coeffs(g, coeff_kind, coeff_N, out); }; });

  auto* sums = app.add_subcommand("sums", "Partial sums on a geometric checkpoint grid");
  std::vector<std::string> sum_kinds{"M_K"};
  double sums_x_min = 1, sums_x_max = 1000, sums_ratio = kDefaultGridRatio;
  sums->add_option("--kinds", sum_kinds, "M_K L_K PSI_K I H_K SUM_RECIP SUM_LOG SUM_DIV")->delimiter(',');
  sums->add_option("--x-min", sums_x_min, "First checkpoint");
  sums->add_option("--x-max", sums_x_max, "Last checkpoint");
  sums->add_option("--grid-ratio", sums_ratio, "Checkpoint ratio");
  sums->callback([&] { action = [&] { return cmd_sums(g, sum_kinds, sums_x_min, sums_x_max, sums_ratio, out); }; });

  auto* verify = app.add_subcommand("verify", "Run a verification suite; exit 1 on failure");
  VerifyParams vp;
  verify->add_option("--suite", vp.suite, "identities | weber | perron | grh-diagnostic | all");
  verify->add_option("--identities-x", vp.identities_x, "Largest checkpoint of the identity suite");
  verify->add_option("--delta-x", vp.delta_x, "Range used to estimate Delta");
  verify->add_option("--fit-x-min", vp.fit_x_min, "Start of exponent fit windows");
  verify->add_option("--weber-x-max", vp.weber_x_max, "End of the Weber-block fit window");
  verify->add_option("--grh-x-max", vp.grh_x_max, "End of the M_K / L_K fit window");
  verify->add_option("--grid-ratio", vp.grid_ratio, "Checkpoint ratio");
  verify->add_option("--perron-configs", vp.perron_configs, "Randomized Perron configurations");
  verify->add_flag("--assert-band", vp.assert_band, "Fail when M_K or L_K exponents leave [0.3, 0.6]");
  verify->callback([&] { action = [&] { return cmd_verify(g, vp, out); }; });

  auto* fit = app.add_subcommand("fit", "Log-log exponent fit of a residual curve");
  std::string fit_target = "weber";
  double fit_x_min = 1e3, fit_x_max = 1e6, fit_ratio = kDefaultGridRatio, fit_delta_x = 0;
  fit->add_option("--target", fit_target,
                  "weber | reciprocal | sum_log | sum_div | mertens | liouville | psi_trend | mertens_decay");
  fit->add_option("--x-min", fit_x_min, "Window start");
  fit->add_option("--x-max", fit_x_max, "Window end");
  fit->add_option("--grid-ratio", fit_ratio, "Checkpoint ratio");
  fit->add_option("--delta-x", fit_delta_x, "Range used to estimate Delta (default: --x-max)");
  fit->callback([&] {
    action = [&] { return cmd_fit(g, fit_target, fit_x_min, fit_x_max, fit_ratio, fit_delta_x, out); };
  });

  auto* perron = app.add_subcommand("perron", "Truncated Perron formula against the exact partial sum");
  PerronParams pp;
  perron->add_option("--kind", pp.kind, "Series kind");
  perron->add_option("--x", pp.x, "Evaluation point (half-integers avoid jumps)");
  perron->add_option("--b", pp.b, "Abscissa of the line (default 1 + 1/log x)");
  perron->add_option("--T", pp.T, "Height (default exp(sqrt(log x)))");
  perron->add_option("--H", pp.H, "Neighborhood parameter (default sqrt T)");
  perron->add_option("--N", pp.N, "Coefficient cutoff (default ceil(2x))");
  perron->add_option("--step", pp.step, "Quadrature step (default min(0.5, 1/log x))");
  perron->add_option("--sweep", pp.sweep, "Run this many randomized configs instead");
  perron->callback([&] { action = [&] { return cmd_perron(g, pp, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_thread_count(g.threads);
    return action();
  } catch (const UnsupportedPrime& e) {
    err << "error: " << e.what() << " (add an override for this prime to the field config)\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace dedekind::cli
