#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dedekind/errors.hpp"
#include "dedekind/parallel.hpp"
#include "dedekind/perron.hpp"
#include "support.hpp"

using namespace dedekind;

namespace {

// Single-term Perron integral (1/pi) int_0^T Re(x^{b+it}/(b+it)) dt by
// composite Simpson on a fine grid, independent of the library quadrature.
double single_term_oracle(double x, double b, double T) {
  const std::size_t n = 2000000;
  const double h = T / static_cast<double>(n);
  const double l = std::log(x);
  double s = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = static_cast<double>(j) * h;
    const double g = std::exp(b * l) * (b * std::cos(t * l) + t * std::sin(t * l)) / (b * b + t * t);
    const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    s += w * g;
  }
  return s * h / 3.0 / std::numbers::pi;
}

}  // namespace

TEST_CASE("eval_dirichlet_polynomial") {
  const std::vector<double> one{0, 1, 0, 0, 0};
  CHECK(eval_dirichlet_polynomial(one, {0.3, 7.0}) == std::complex<double>(1, 0));
  const ArithmeticContext Q(testing::field("rationals"), 10000);
  const auto zeta = Q.table(SeriesKind::Zeta).as_reals();
  const auto mu = Q.table(SeriesKind::InverseZeta).as_reals();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(std::abs(eval_dirichlet_polynomial(zeta, 2.0).real() - pi2 / 6) <= 1e-4);
  CHECK(std::abs(eval_dirichlet_polynomial(mu, 2.0).real() - 6 / pi2) <= 2e-4);
}

TEST_CASE("Perron integral of the constant 1") {
  const std::vector<double> one{0, 1};
  const double x = std::numbers::e;
  const auto q = vertical_line_integral(one, x, 1.5, 200, 0.5);
  CHECK(std::abs(q.value - 1.0) <= 0.05);
  CHECK(std::abs(q.value - single_term_oracle(x, 1.5, 200)) <= 1e-6);
  CHECK(q.imag_residue < 1e-8 * (1 + std::abs(q.value)));
}

TEST_CASE("quadrature step precondition") {
  const std::vector<double> one{0, 1};
  CHECK_THROWS_AS(vertical_line_integral(one, 100, 1.5, 200, 0.3), DomainError);
  CHECK_NOTHROW(vertical_line_integral(one, 100, 1.5, 200, 1 / std::log(100.0)));
  CHECK_THROWS_AS(vertical_line_integral(one, 2, 1.5, 200, 0.6), DomainError);
}

TEST_CASE("step halving stays within the error estimate") {
  const ArithmeticContext Q(testing::field("rationals"), 1000);
  const auto mu = Q.table(SeriesKind::InverseZeta).as_reals();
  const std::span<const double> a = std::span(mu).first(202);
  const double x = 100.5;
  const double h = 1 / std::log(x);
  const auto coarse = vertical_line_integral(a, x, 1 + 1 / std::log(x), 2000, h);
  const auto fine = vertical_line_integral(a, x, 1 + 1 / std::log(x), 2000, h / 2);
  CHECK(std::abs(coarse.value - fine.value) < coarse.error_estimate);
  CHECK(coarse.imag_residue < 1e-8 * (1 + std::abs(coarse.value)));
}

TEST_CASE("result does not depend on the thread count") {
  const ArithmeticContext Qi(testing::field("gaussian"), 200);
  const auto a = Qi.table(SeriesKind::Zeta).as_reals();
  set_thread_count(1);
  const auto one = vertical_line_integral(a, 50.5, 1.3, 3000, 0.1);
  set_thread_count(3);
  const auto three = vertical_line_integral(a, 50.5, 1.3, 3000, 0.1);
  set_thread_count(0);
  CHECK(one.value == three.value);
  CHECK(one.error_estimate == three.error_estimate);
}

TEST_CASE("truncated Perron recovers M(100) = 1") {
  const ArithmeticContext Q(testing::field("rationals"), 1000);
  PerronConfig c;
  c.x = 100.5;
  c.b = 1 + 1 / std::log(c.x);
  c.T = 1e4;
  c.H = 100;
  c.N = 1000;
  c.quadrature_step = 1 / std::log(c.x);
  const auto r = perron_truncated(SeriesKind::InverseZeta, Q, c);
  CHECK(r.exact_partial_sum == 1);
  CHECK(r.observed_error <= r.budget);
  CHECK(r.pass);
  CHECK(r.imag_residue < 1e-8 * (1 + std::abs(r.contour_estimate)));
}

TEST_CASE("truncated Perron recovers I(50) in Q(i)") {
  const ArithmeticContext Qi(testing::field("gaussian"), 200);
  auto c = default_perron_config(50.5);
  c.T = 1e4;
  c.H = 100;
  const auto r = perron_truncated(SeriesKind::Zeta, Qi, c);
  std::int64_t I50 = 0;
  for (std::uint64_t n = 1; n <= 50; ++n) I50 += testing::gaussian_ideal_count(n);
  CHECK(r.exact_partial_sum == I50);
  CHECK(r.pass);
}

TEST_CASE("neighborhood uses the half-open interval") {
  // x = 201.5 and H = 201.5 put the lower end at 200.5 and the upper at
  // 202.5, so exactly 201 and 202 fall inside.
  const ArithmeticContext Q(testing::field("rationals"), 500);
  auto c = default_perron_config(201.5);
  c.H = 201.5;
  c.T = 100;
  const auto r = perron_truncated(SeriesKind::Zeta, Q, c);
  CHECK(r.neighborhood_term == 2);
  // H = 100.75 gives (199.5, 203.5]: 200..203.
  c.H = 100.75;
  CHECK(perron_truncated(SeriesKind::Zeta, Q, c).neighborhood_term == 4);
}

TEST_CASE("config validation") {
  auto c = default_perron_config(100.5);
  CHECK(c.b == doctest::Approx(1 + 1 / std::log(100.5)));
  CHECK(c.T == doctest::Approx(std::exp(std::sqrt(std::log(100.5)))));
  CHECK(c.H == doctest::Approx(std::sqrt(c.T)));
  CHECK(c.N == 201);
  CHECK_NOTHROW(validate(c));
  auto bad = c;
  bad.b = 1.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = c;
  bad.N = 200;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = c;
  bad.H = 1.5;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = c;
  bad.quadrature_step = 0.5;
  CHECK_THROWS_AS(validate(bad), DomainError);
  CHECK_THROWS_AS(default_perron_config(1.5), DomainError);
}

TEST_CASE("budget shrinks as T grows") {
  const ArithmeticContext Qi(testing::field("gaussian"), 1000);
  auto c = default_perron_config(120.5);
  c.H = 20;
  double previous = INFINITY;
  for (double T : {1e3, 3e3, 1e4}) {
    c.T = T;
    const auto r = perron_truncated(SeriesKind::InverseZeta, Qi, c);
    CHECK(r.budget < previous);
    CHECK(r.pass);
    previous = r.budget;
  }
}

TEST_CASE("random configs") {
  const auto cs = random_perron_configs(50, 5);
  CHECK(cs.size() == 50);
  for (const auto& c : cs) {
    CHECK_NOTHROW(validate(c));
    CHECK(c.x >= 20);
    CHECK(c.x <= 500);
    CHECK(c.x - std::floor(c.x) == 0.5);
    CHECK(c.T >= 1e3);
    CHECK(c.T <= 1e5);
    CHECK(c.H >= 10 * (1 - 1e-12));
    CHECK(c.H <= std::sqrt(c.T) * (1 + 1e-12));
  }
  const auto again = random_perron_configs(50, 5);
  CHECK(again[7].T == cs[7].T);
}

TEST_CASE("classical route on Q at 100.5") {
  const ArithmeticContext Q(testing::field("rationals"), 1000);
  const auto r = classical_perron(SeriesKind::InverseZeta, Q, 100.5, 2000);
  CHECK(r.exact_partial_sum == 1);
  CHECK(r.pass);
  CHECK(r.observed_error <= r.budget);
}
