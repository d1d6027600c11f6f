#include <doctest.h>

#include <cmath>
#include <random>

#include "optosqueeze/analytic.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/gaussian.hpp"
#include "optosqueeze/transform.hpp"

using namespace optosqueeze;

namespace {

// Model at the optimal detuning with prescribed omega' and G'.
LinearizedModel at_optimal(double omega_p, double G_p, double kappa, double gamma, double n_th) {
  LinearizedModel lin;
  const double q = omega_p * omega_p;  // 1 + 4 Lambda
  lin.Lambda = (q - 1.0) / 4.0;
  lin.omega_m_tilde = 1.0 + 2.0 * lin.Lambda;
  lin.G = G_p * std::pow(q, 0.25);
  lin.Delta_a = omega_p;
  lin.kappa = kappa;
  lin.gamma = gamma;
  lin.n_th = n_th;
  return lin;
}

}  // namespace

TEST_CASE("cooling rates") {
  const auto on = cooling_rates(0.06, 0.1, 2.95, 2.95);
  CHECK(on.Gamma_minus == doctest::Approx(4 * 0.06 * 0.06 / 0.1).epsilon(1e-14));
  CHECK(on.Gamma == doctest::Approx(on.Gamma_minus - on.Gamma_plus));

  const auto narrow = cooling_rates(0.01, 1e-3, 3.0, 3.0);
  CHECK(narrow.Gamma_plus == doctest::Approx(1e-3 * std::pow(0.01 / 6.0, 2)).epsilon(1e-6));

  const auto none = cooling_rates(0.0, 0.1, 2.0, 2.0);
  CHECK(none.Gamma_minus == 0.0);
  CHECK(none.Gamma_plus == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int i = 0; i < 200; ++i) {
    const auto c = cooling_rates(u(rng), u(rng), u(rng), u(rng));
    CHECK(c.Gamma_minus > c.Gamma_plus);
    CHECK(c.Gamma_plus > 0.0);
  }
}

TEST_CASE("effective occupation") {
  CHECK(effective_occupation(1e-3, 4.2, CoolingRates{}) == doctest::Approx(4.2));
  const auto c = cooling_rates(0.06, 0.1, 2.95, 2.95);
  CHECK(effective_occupation(0.0, 100.0, c) == doctest::Approx(c.Gamma_plus / c.Gamma));
  CHECK_THROWS_AS(effective_occupation(0.0, 1.0, CoolingRates{}), DomainError);
}

TEST_CASE("cooling-limit chain, frozen from mpmath") {
  const auto c = cooling_rates(0.06, 0.1, 2.95, 2.95);
  CHECK(c.Gamma_minus == doctest::Approx(0.144).epsilon(1e-14));
  CHECK(c.Gamma_plus == doctest::Approx(1.034111310592460e-5).epsilon(1e-12));
  const double n_eff = effective_occupation(1e-6, 167.0, c);
  CHECK(n_eff == doctest::Approx(1.231615401143678e-3).epsilon(1e-12));
  const double r = std::log(2.95) / 2.0;
  CHECK(r == doctest::Approx(0.5409025851758642).epsilon(1e-14));
  CHECK(variance_cooling_limit(n_eff, r) == doctest::Approx(0.1699090221698792).epsilon(1e-12));
}

TEST_CASE("cooling-limit variance") {
  CHECK(variance_cooling_limit(0.0, 0.0) == 0.5);
  CHECK(variance_cooling_limit(0.0, std::log(2.0) / 2.0) == doctest::Approx(0.25));
}

TEST_CASE("strong-coupling variance limits") {
  const double r = 1.3;
  CHECK(variance_strong_coupling(1e-14, 0.0, 0.5, 0.1, r) ==
        doctest::Approx(std::exp(-2 * r) / 2).epsilon(1e-9));
  const double gsc = strong_coupling_rate(10.0, 0.1, 1e-6);
  CHECK(variance_strong_coupling(1e-6, 0.0, 10.0, 0.1, 20.0) ==
        doctest::Approx(1e-6 / (4 * (1e-6 + gsc))).epsilon(1e-9));
  CHECK(variance_strong_coupling(1e-6, 0.0, 10.0, 0.1, 20.0) == doctest::Approx(2.5e-6).epsilon(1e-3));
}

TEST_CASE("ultimate variance") {
  CHECK(ultimate_variance(1e-6, 0.0) == 1.0);
  CHECK(ultimate_variance(1e-6, 1e12) < 1e-17);
  CHECK(ultimate_variance(1e-6, 0.0590) == doctest::Approx(4.237270181058555e-6).epsilon(1e-12));
}

TEST_CASE("analytic variances decrease with r") {
  const auto c = cooling_rates(0.02, 0.1, 2.0, 2.0);
  const double n_eff = effective_occupation(1e-5, 3.0, c);
  double last_c = 1e300, last_s = 1e300;
  for (double r = 0.0; r < 3.0; r += 0.1) {
    const double vc = variance_cooling_limit(n_eff, r);
    const double vs = variance_strong_coupling(1e-5, 3.0, 0.5, 0.1, r);
    CHECK(vc < last_c);
    CHECK(vs < last_s);
    last_c = vc;
    last_s = vs;
  }
}

TEST_CASE("regime flags") {
  CHECK(cooling_limit_regime(0.01, 0.1, 1.0));
  CHECK_FALSE(cooling_limit_regime(0.02, 0.1, 1.0));
  CHECK_FALSE(cooling_limit_regime(0.01, 0.1, 0.9));
  CHECK(strong_coupling_regime(0.5, 0.1, 5.0));
  CHECK_FALSE(strong_coupling_regime(0.4, 0.1, 5.0));
  CHECK_FALSE(strong_coupling_regime(0.5, 0.1, 4.9));
}

TEST_CASE("in-regime agreement with the Lyapunov variance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double omega_p = 1.5 + 3.0 * u(rng);
    const double kappa = omega_p / 10.0 * (0.2 + 0.8 * u(rng));
    const double G_p = kappa / 10.0 * (0.2 + 0.8 * u(rng));
    const auto lin = at_optimal(omega_p, G_p, kappa, 1e-6, 10.0 * u(rng));
    const auto e = analytic_estimate(lin);
    REQUIRE(e.cooling_limit_applicable);
    const double v = steady_state_variance(lin);
    CHECK(std::abs(e.cooling_limit_variance - v) / v < 0.05);
  }
  for (int i = 0; i < 10; ++i) {
    const double omega_p = 1.5 + 3.0 * u(rng);
    const double G_p = omega_p / 10.0 * (0.5 + 0.5 * u(rng));
    const double kappa = G_p / 5.0 * (0.2 + 0.8 * u(rng));
    const auto lin = at_optimal(omega_p, G_p, kappa, 1e-6, 10.0 * u(rng));
    const auto e = analytic_estimate(lin);
    REQUIRE(e.strong_coupling_applicable);
    const double v = steady_state_variance(lin);
    CHECK(std::abs(e.strong_coupling_variance - v) / v < 0.05);
  }
}

TEST_CASE("strong-coupling flag requires the optimal detuning") {
  auto lin = at_optimal(3.0, 0.25, 0.02, 1e-6, 0.0);
  CHECK(analytic_estimate(lin).strong_coupling_applicable);
  lin.Delta_a *= 1.01;
  CHECK_FALSE(analytic_estimate(lin).strong_coupling_applicable);
}
