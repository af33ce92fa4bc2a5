#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dpwaves/bifurcation.hpp"
#include "dpwaves/continuation.hpp"
#include "dpwaves/cosine_series.hpp"
#include "dpwaves/errors.hpp"
#include "dpwaves/kernel.hpp"
#include "dpwaves/wave_analysis.hpp"
#include "test_support.hpp"

using namespace dpwaves;

namespace {

constexpr double kPi = std::numbers::pi;

WaveState polished_seed(double s, int n = 64) {
  const auto bp = bifurcation_mu(1, 1.0, 1.0);
  const auto model = local_branch_model(bp);
  const WaveState seed = seed_state(bp, model, s, PeriodicGrid(1.0, n));
  const auto t = model_tangent(bp, model, s, seed.n_modes());
  const ArclengthPlane plane{seed.coefficient_vector(), seed.mu(), t, 0.0};
  return newton_correct(seed, plane, {1e-12, 10}).state;
}

WaveState from_coeffs(std::vector<double> c, double mu, double a, int n = 64) {
  c.resize(static_cast<std::size_t>(n / 2), 0.0);
  return {PeriodicGrid(1.0, n), std::move(c), mu, a};
}

}  // namespace

TEST_CASE("height sandwich") {
  const WaveState w = polished_seed(5e-3);
  CHECK(check_height_sandwich(w).status == CheckStatus::Pass);
  const double lam = lambda_of_mu(1.5, 1.0);
  CHECK(check_height_sandwich(from_coeffs({lam}, 1.5, 1.0)).status == CheckStatus::NotApplicable);
  CHECK(check_height_sandwich(from_coeffs({lam - 0.2, 0.05}, 1.5, 1.0)).status == CheckStatus::Fail);
}

TEST_CASE("max below speed") {
  CHECK(check_max_below_speed(polished_seed(5e-3)).status == CheckStatus::Pass);
  // phi = mu with a = mu^2 is a solution touching the bound everywhere.
  CHECK(check_max_below_speed(from_coeffs({2.0}, 2.0, 4.0)).status == CheckStatus::Boundary);
  CHECK(check_max_below_speed(from_coeffs({1.5, 0.01}, 1.5, 1.0)).status == CheckStatus::Fail);
}

TEST_CASE("monotone half period") {
  CHECK(check_monotone_half_period(polished_seed(5e-3)).status == CheckStatus::Pass);
  CHECK(check_monotone_half_period(from_coeffs({1.0, 0.0, 0.1}, 2.0, 1.0)).status == CheckStatus::Fail);
  CHECK(check_monotone_half_period(from_coeffs({1.0}, 2.0, 1.0)).status == CheckStatus::NotApplicable);
}

TEST_CASE("curvature signs") {
  const double s = 5e-3;
  const WaveState w = polished_seed(s);
  const CheckResult r = check_curvature_signs(w, 1e-8);
  CHECK(r.status == CheckStatus::Pass);
  // leading order phi''(0) = -s (2 pi / P)^2
  double d2 = 0.0;
  for (int k = 1; k < w.n_modes(); ++k) d2 -= std::pow(2 * kPi * k, 2) * w.coefficients()[static_cast<std::size_t>(k)];
  CHECK(d2 == doctest::Approx(-s * 4 * kPi * kPi).epsilon(0.05));
  CHECK(check_curvature_signs(from_coeffs({1.0}, 2.0, 1.0), 1e-8).status == CheckStatus::NotApplicable);
  CHECK(check_curvature_signs(w, 1.0).status == CheckStatus::NotApplicable);
}

TEST_CASE("trough gap") {
  for (double mu : {1.1, 2.0, 5.0}) {
    const WaveState c = from_coeffs({lambda_of_mu(mu, 1.0)}, mu, 1.0);
    CHECK(trough_gap(c) > 0.0);
    CHECK(check_trough_gap(c).status == CheckStatus::Pass);
  }
  const WaveState w = polished_seed(5e-3);
  CHECK(trough_gap(w) >= crest_gap(w));
}

TEST_CASE("difference identity and symmetrization signs on a solution") {
  const WaveState w = polished_seed(1e-2);
  CHECK(check_difference_identity(w).status == CheckStatus::Pass);
  const double P = w.grid().period();
  const auto c = w.coefficients();
  int violations = 0;
  for (int i = 1; i < 16; ++i) {
    const double x = -P / 2 + i * P / 32;
    for (int j = 1; j < 16; ++j) {
      const double y = -P / 2 + j * P / 32;
      if (kernel_K_P(x - y, P) - kernel_K_P(x + y, P) < 0.0) ++violations;
      for (int m = 1; m < 16; ++m) {
        const double h = m * P / 32;
        const double f1 = cosine_eval(c, P, y + h), f2 = cosine_eval(c, P, y - h);
        if (f1 * f1 - f2 * f2 < -1e-14) ++violations;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("crest exponent on calibration profiles") {
  const PeriodicGrid g(1.0, 512);
  const CrestFit quad = crest_exponent(RealField::sample(g, [](double x) { return 1 - x * x; }));
  CHECK(quad.exponent == doctest::Approx(2.0).epsilon(0.01));
  CHECK(quad.r2 > 0.999);
  CHECK(quad.r_max == doctest::Approx(0.125));
  CHECK(quad.r_min == doctest::Approx(4.0 / 512));
  const CrestFit cone = crest_exponent(RealField::sample(g, [](double x) { return 1 - std::abs(x); }));
  CHECK(cone.exponent == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(crest_exponent(RealField::sample(PeriodicGrid(1.0, 32), [](double x) { return -x * x; })),
                  WindowTooSmall);
  CHECK(crest_exponent(polished_seed(5e-3, 512)).exponent == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("cuspon pairing equals twice the slope at zero") {
  auto odd = [](auto x) { return x * exp(-x * x); };
  auto even = [](auto x) { return exp(-x * x); };
  CHECK(cuspon_pairing(sample_test_function(odd, 10.0, 4000)) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(std::abs(cuspon_pairing(sample_test_function(even, 10.0, 4000))) < 1e-10);

  const double e1 = std::abs(cuspon_pairing(sample_test_function(odd, 10.0, 200)) - 2.0);
  const double e2 = std::abs(cuspon_pairing(sample_test_function(odd, 10.0, 400)) - 2.0);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.1));

  CHECK_THROWS_AS(cuspon_pairing(sample_test_function(odd, 2.0, 100)), DomainError);
}

TEST_CASE("verify aggregates mandatory checks") {
  const VerificationReport good = verify(polished_seed(5e-3));
  CHECK(good.overall);
  CHECK(good.find("height_sandwich")->mandatory);
  CHECK_FALSE(good.find("curvature_signs")->mandatory);
  for (const auto& c : good.checks) CHECK_FALSE(c.anchor.empty());

  const VerificationReport flat = verify(from_coeffs({lambda_of_mu(1.5, 1.0)}, 1.5, 1.0));
  CHECK(flat.overall);
  CHECK(flat.find("height_sandwich")->status == CheckStatus::NotApplicable);

  std::mt19937 rng(4);
  auto c = dpwaves::testing::random_coeffs(32, rng, 0.5);
  const VerificationReport bad = verify(from_coeffs(c, 0.1, 1.0));
  CHECK_FALSE(bad.overall);
  int failing = 0;
  for (const auto& r : bad.checks) failing += r.status == CheckStatus::Fail;
  CHECK(failing >= 2);

  const auto round = VerificationReport::from_json(nlohmann::json::parse(good.to_json().dump()));
  CHECK(round.to_json() == good.to_json());
}

TEST_CASE("cuspon suite") {
  const auto suite = cuspon_test_suite();
  CHECK(suite.size() == 10);
  int odd = 0;
  for (const auto& c : suite) {
    odd += c.odd;
    CHECK(std::abs(cuspon_pairing(c.samples) - c.expected) < 1e-6);
    CHECK(c.samples.d1[static_cast<std::size_t>(c.samples.cells_per_side)] * 2 == doctest::Approx(c.expected));
  }
  CHECK(odd == 5);
}
