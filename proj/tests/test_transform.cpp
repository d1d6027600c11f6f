#include <doctest.h>

#include <cmath>
#include <random>

#include "optosqueeze/transform.hpp"

using namespace optosqueeze;

TEST_CASE("squeezing parameter") {
  CHECK(squeezing_parameter(0.0, 1.0) == 0.0);
  CHECK(squeezing_parameter(2.0, 1.0) == doctest::Approx(0.5493061443340548).epsilon(1e-14));
  CHECK(omega_prime(1.92, 1.0) == doctest::Approx(2.95).epsilon(0.005));
  CHECK(omega_prime(2.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("transformed occupation") {
  CHECK(transformed_occupation(3.7, 0.0) == 3.7);
  const double r = std::log(9.0) / 4.0;
  CHECK(transformed_occupation(0.0, r) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(transformed_occupation(100.0, r) == doctest::Approx(167.0).epsilon(1e-14));
}

TEST_CASE("transformed model") {
  LinearizedModel lin;
  lin.Lambda = 0.0;
  lin.G = 0.05;
  auto tm = transformed_model(lin);
  CHECK(tm.omega_m_prime == 1.0);
  CHECK(tm.G_prime == 0.05);
  CHECK(tm.r == 0.0);

  lin.Lambda = 2.0;
  lin.omega_m_tilde = 5.0;
  lin.n_th = 100.0;
  lin.Delta_a = 3.0;
  tm = transformed_model(lin);
  CHECK(tm.omega_m_prime == doctest::Approx(3.0));
  CHECK(tm.G_prime == doctest::Approx(0.05 / std::sqrt(3.0)));
  CHECK(tm.n_th_prime == doctest::Approx(167.0));
  CHECK(tm.Delta_a == 3.0);
}

TEST_CASE("property: transform identities over random Lambda") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(0.0, 50.0);
  std::uniform_real_distribution<double> g(1e-4, 1.0);
  std::uniform_real_distribution<double> n(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    LinearizedModel lin;
    lin.Lambda = lam(rng);
    lin.omega_m_tilde = 1.0 + 2.0 * lin.Lambda;
    lin.G = g(rng);
    lin.n_th = n(rng);
    const auto tm = transformed_model(lin);
    CHECK(std::exp(2 * tm.r) == doctest::Approx(std::sqrt(1 + 4 * lin.Lambda)).epsilon(1e-13));
    CHECK(tm.omega_m_prime * tm.omega_m_prime ==
          doctest::Approx(lin.omega_m_tilde * lin.omega_m_tilde - 4 * lin.Lambda * lin.Lambda)
              .epsilon(1e-12));
    CHECK(tm.omega_m_prime ==
          doctest::Approx((lin.G / tm.G_prime) * (lin.G / tm.G_prime)).epsilon(1e-13));
    // inverse transform recovers omega_m and G
    CHECK(tm.omega_m_prime * std::exp(-2 * tm.r) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tm.G_prime * std::exp(tm.r) == doctest::Approx(lin.G).epsilon(1e-14));
    CHECK(tm.omega_m_prime >= 1.0);
    CHECK(tm.G_prime <= lin.G);
    CHECK(tm.n_th_prime >= lin.n_th);
  }
}
