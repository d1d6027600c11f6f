#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "optosqueeze/gaussian.hpp"
#include "optosqueeze/model.hpp"
#include "optosqueeze/stability.hpp"
#include "optosqueeze/steadystate.hpp"
#include "optosqueeze/transform.hpp"

using namespace optosqueeze;
using cd = std::complex<double>;

namespace {

LinearizedModel model(double Delta, double Lambda, double G, double kappa, double gamma) {
  LinearizedModel lin;
  lin.Delta_a = Delta;
  lin.Lambda = Lambda;
  lin.omega_m_tilde = 1.0 + 2.0 * Lambda;
  lin.G = G;
  lin.kappa = kappa;
  lin.gamma = gamma;
  return lin;
}

std::vector<cd> sorted_spectrum(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<cd> v(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(v.begin(), v.end(), [](cd a, cd b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  return v;
}

// Greedy nearest matching; eigenvalues here are well separated.
double max_spectrum_gap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const auto sa = sorted_spectrum(a);
  auto sb = sorted_spectrum(b);
  double gap = 0.0;
  for (const auto& z : sa) {
    auto it = std::min_element(sb.begin(), sb.end(),
                               [&](cd x, cd y) { return std::abs(x - z) < std::abs(y - z); });
    gap = std::max(gap, std::abs(*it - z) / std::max(1.0, std::abs(z)));
    sb.erase(it);
  }
  return gap;
}

LinearizedModel random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> D(0.2, 5.0), L(0.0, 3.0), G(0.0, 0.5), k(0.01, 1.0),
      g(1e-6, 1e-2);
  return model(D(rng), L(rng), G(rng), k(rng), g(rng));
}

}  // namespace

TEST_CASE("decoupled drift matrix") {
  const auto lin = model(2.0, 0.0, 0.0, 0.1, 0.01);
  const auto m = drift_matrix(lin).entries;
  CHECK(std::abs(m(0, 2)) == 0.0);
  CHECK(std::abs(m(2, 3)) == 0.0);
  const auto s = sorted_spectrum(m);
  CHECK(std::abs(s[0] - cd(-0.05, -2.0)) < 1e-12);
  CHECK(std::abs(s[1] - cd(-0.005, -1.0)) < 1e-12);
  CHECK(std::abs(s[2] - cd(-0.005, 1.0)) < 1e-12);
  CHECK(std::abs(s[3] - cd(-0.05, 2.0)) < 1e-12);
  const auto v = is_stable_eigen(drift_matrix(lin));
  CHECK(v.stable);
  CHECK(v.margin == doctest::Approx(0.005).epsilon(1e-10));
}

TEST_CASE("transformed drift matrix has the expected form") {
  const auto lin = model(3.0, 2.0, 0.1, 0.2, 1e-3);
  const auto m = transformed_drift_matrix(lin).entries;
  const double wp = omega_prime(lin.Lambda, 1.0);
  const double Gp = transformed_model(lin).G_prime;
  const cd I(0, 1);
  Eigen::Matrix4cd expected;
  expected << I * lin.Delta_a - lin.kappa / 2, 0.0, -I * Gp, -I * Gp,
              0.0, -I * lin.Delta_a - lin.kappa / 2, I * Gp, I * Gp,
              -I * Gp, -I * Gp, I * wp - lin.gamma / 2, 0.0,
              I * Gp, I * Gp, 0.0, -I * wp - lin.gamma / 2;
  CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("property: similarity and quadrature spectra agree") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto lin = random_model(rng);
    const auto a = drift_matrix(lin).entries;
    CHECK(max_spectrum_gap(a, transformed_drift_matrix(lin).entries) < 1e-10);
    const Eigen::MatrixXcd q = build_quadrature_system(lin).drift.cast<cd>();
    CHECK(max_spectrum_gap(a, q) < 1e-10);
  }
}

TEST_CASE("eigenvalues closed under conjugation") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto s = sorted_spectrum(drift_matrix(random_model(rng)).entries);
    for (const auto& z : s) {
      double best = 1e300;
      for (const auto& w : s) {
        best = std::min(best, std::abs(w - std::conj(z)));
      }
      CHECK(best < 1e-10);
    }
  }
}

TEST_CASE("criterion: no coupling is stable, red detuning required") {
  CHECK(is_stable_criterion(model(0.5, 1.0, 0.0, 0.1, 0.0)) == CriterionVerdict::Stable);
  CHECK(is_stable_criterion(model(-0.5, 1.0, 0.0, 0.1, 0.0)) == CriterionVerdict::NotApplicable);
  CHECK(is_stable_criterion(model(0.0, 1.0, 0.0, 0.1, 0.0)) == CriterionVerdict::NotApplicable);
}

TEST_CASE("criterion: inflating G past the boundary destabilizes") {
  auto lin = model(2.0, 1.5, 0.0, 0.1, 1e-6);
  const double Gb = std::sqrt((1 + 4 * lin.Lambda) * (4 * lin.Delta_a + lin.kappa * lin.kappa / lin.Delta_a) / 16);
  lin.G = 1.1 * Gb;
  CHECK(is_stable_criterion(lin) == CriterionVerdict::Unstable);
  CHECK_FALSE(is_stable_eigen(drift_matrix(lin)).stable);
  lin.G = 0.9 * Gb;
  CHECK(is_stable_criterion(lin) == CriterionVerdict::Stable);
  CHECK(is_stable_eigen(drift_matrix(lin)).stable);
}

TEST_CASE("criterion: eigen margin vanishes at the closed-form boundary") {
  for (double D : {0.5, 1.0, 2.0, 4.0}) {
    auto lin = model(D, 0.7, 0.0, 0.1, 0.0);
    const double Gb = std::sqrt((1 + 4 * lin.Lambda) * (4 * D + lin.kappa * lin.kappa / D) / 16);
    // bisect the eigen verdict flip in G
    double lo = 0.5 * Gb, hi = 1.5 * Gb;
    for (int i = 0; i < 80; ++i) {
      lin.G = 0.5 * (lo + hi);
      (is_stable_eigen(drift_matrix(lin)).stable ? lo : hi) = lin.G;
    }
    CHECK(lo == doctest::Approx(Gb).epsilon(1e-6));
    lin.G = Gb;
    CHECK(std::abs(is_stable_eigen(drift_matrix(lin)).margin) < 1e-3);
  }
}

TEST_CASE("damping-retaining criterion matches eigen test off the boundary") {
  std::mt19937_64 rng(9);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    auto lin = random_model(rng);
    lin.gamma = 0.0;
    const auto e = is_stable_eigen(drift_matrix(lin));
    if (std::abs(e.margin) < 1e-3) {
      continue;
    }
    ++compared;
    const auto c = is_stable_criterion(lin);
    CHECK((c == CriterionVerdict::Stable) == e.stable);
    CHECK((is_stable_criterion_with_damping(lin) == CriterionVerdict::Stable) == e.stable);
  }
  CHECK(compared > 500);
}

TEST_CASE("fig. 2 reference point is stable") {
  SIInput si;
  si.power_w = 1e-4;
  FixedPointOptions o;
  o.branch = BranchSelection::Continuation;
  const auto op = solve_operating_point(to_internal(si), o);
  CHECK(is_stable_eigen(drift_matrix(op.linear)).stable);
  CHECK(is_stable_criterion(op.linear) == CriterionVerdict::Stable);
}

TEST_CASE("optimal-point threshold") {
  CHECK(optimal_point_threshold(1.0, 1e-4) == doctest::Approx(0.05196152422706632).epsilon(1e-14));
  CHECK(optimal_point_threshold(1.0, 4e-4) == doctest::Approx(2 * optimal_point_threshold(1.0, 1e-4)));
  CHECK(optimal_point_threshold(1.0, 0.0) == 0.0);
  CHECK(1e-4 < optimal_point_threshold(1.0, 1e-4));
}
