#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/model.hpp"
#include "optosqueeze/steadystate.hpp"
#include "optosqueeze/transform.hpp"

using namespace optosqueeze;

namespace {

// Plain bisection on a sign change; the independent oracle for scalar roots.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SystemParams fig2_params() {
  SIInput si;
  si.power_w = 1e-4;
  return to_internal(si);
}

FixedPointOptions continuation() {
  FixedPointOptions o;
  o.branch = BranchSelection::Continuation;
  return o;
}

}  // namespace

TEST_CASE("real_cubic_roots: small cases") {
  auto r = real_cubic_roots(1, 0, 0, 0);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(0.0));

  r = real_cubic_roots(0, 0, 1, -5);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == 5.0);

  r = real_cubic_roots(1, -6, 11, -6);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.0));
  CHECK(r[2] == doctest::Approx(3.0));

  r = real_cubic_roots(0, 1, 0, -4);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-2.0));
  CHECK(r[1] == doctest::Approx(2.0));

  CHECK(real_cubic_roots(0, 1, 0, 4).empty());
  CHECK_THROWS_AS(real_cubic_roots(0, 0, 0, 0), DomainError);
}

TEST_CASE("real_cubic_roots: Duffing cubic against bisection") {
  const double eta = 1e-4;
  const auto roots = real_cubic_roots(16 * eta, 0, 12 * eta + 1.0, -53.0);
  REQUIRE(roots.size() == 1);
  const double oracle =
      bisect([&](double b) { return 16 * eta * b * b * b + (12 * eta + 1) * b - 53.0; }, 0.0, 100.0);
  CHECK(roots[0] == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(roots[0] == doctest::Approx(25.72630335717233).epsilon(1e-13));
}

TEST_CASE("real_cubic_roots: Duffing cubic is monotone, one root for every source") {
  for (double eta : {1e-6, 1e-4, 1e-2, 1.0}) {
    for (double c : {0.0, 1e-3, 1.0, 1e3, 1e8}) {
      const auto roots = real_cubic_roots(16 * eta, 0, 12 * eta + 1.0, -c);
      REQUIRE(roots.size() == 1);
      CHECK(roots[0] >= 0.0);
    }
  }
}

TEST_CASE("fixed point: zero drive is the origin") {
  SystemParams p;
  p.drive_amplitude = 0.0;
  const auto fp = solve_classical_fixed_point(p);
  CHECK(std::abs(fp.alpha) == 0.0);
  CHECK(fp.beta == 0.0);
}

TEST_CASE("fixed point: eta = 0 against a scanned scalar residual") {
  SystemParams p;
  p.eta = 0.0;
  p.g0 = 1e-3;
  p.delta_a = 1.0;
  p.kappa = 0.2;
  p.drive_amplitude = 30.0;
  const auto fp = solve_classical_fixed_point(p);

  auto f = [&](double b) {
    const double D = p.delta_a - 2 * p.g0 * b;
    return b - p.g0 * p.drive_amplitude * p.drive_amplitude / (D * D + p.kappa * p.kappa / 4);
  };
  // grid scan for sign changes, then refine
  int changes = 0;
  double oracle = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double a = 50.0 * i / n;
    const double b = 50.0 * (i + 1) / n;
    if ((f(a) > 0) != (f(b) > 0)) {
      ++changes;
      oracle = bisect(f, a, b);
    }
  }
  REQUIRE(changes == 1);
  CHECK(fp.beta == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("fixed point: amplitude equations hold") {
  SystemParams p;
  p.delta_a = 2.0;
  p.drive_amplitude = 500.0;
  const auto fp = solve_classical_fixed_point(p);
  const double Delta = p.delta_a - 2 * p.g0 * fp.beta;
  const double a2 = std::norm(fp.alpha);
  CHECK(a2 == doctest::Approx(p.drive_amplitude * p.drive_amplitude /
                              (Delta * Delta + p.kappa * p.kappa / 4))
                  .epsilon(1e-12));
  const std::complex<double> i(0, 1);
  const auto res = (-i * Delta - p.kappa / 2) * fp.alpha - i * p.drive_amplitude;
  CHECK(std::abs(res) < 1e-10 * p.drive_amplitude);
  const double b = fp.beta;
  CHECK(16 * p.eta * b * b * b + (12 * p.eta + 1) * b == doctest::Approx(p.g0 * a2).epsilon(1e-12));
  CHECK(fp.residual <= 1e-12);
}

TEST_CASE("fixed point: cubic variant") {
  SystemParams p;
  p.nonlinearity = Nonlinearity::Cubic;
  p.delta_a = 2.0;
  p.drive_amplitude = 500.0;
  const auto fp = solve_classical_fixed_point(p, continuation());
  const double b = fp.beta;
  CHECK(12 * p.eta * b * b + b + 3 * p.eta ==
        doctest::Approx(p.g0 * std::norm(fp.alpha)).epsilon(1e-12));
  const auto lin = linearize(p, fp);
  CHECK(lin.Lambda == doctest::Approx(6 * p.eta * b));
}

TEST_CASE("fixed point: nondecreasing in drive at fixed detuning") {
  SystemParams p;
  p.delta_a = 2.5;
  double last_alpha = 0.0;
  double last_beta = 0.0;
  for (double om = 0.0; om <= 1500.0; om += 100.0) {
    p.drive_amplitude = om;
    const auto fp = solve_classical_fixed_point(p, continuation());
    CHECK(std::abs(fp.alpha) >= last_alpha);
    CHECK(fp.beta >= last_beta);
    last_alpha = std::abs(fp.alpha);
    last_beta = fp.beta;
  }
}

TEST_CASE("fixed point: zero-strength detection leaves the result unchanged") {
  SystemParams p;
  p.delta_a = 2.0;
  p.drive_amplitude = 700.0;
  const auto plain = solve_classical_fixed_point(p);
  p.detection = DetectionParams{1.0, 1e-4, 0.1, 0.0};
  const auto with = solve_classical_fixed_point(p);
  CHECK(with.beta == plain.beta);
  CHECK(with.alpha == plain.alpha);
  REQUIRE(with.alpha_s.has_value());
  CHECK(std::abs(*with.alpha_s) == 0.0);
}

TEST_CASE("linearize: coefficients") {
  SystemParams p;
  ClassicalFixedPoint fp;
  fp.beta = 0.0;
  auto lin = linearize(p, fp);
  CHECK(lin.Lambda == doctest::Approx(3e-4));
  CHECK(lin.omega_m_tilde == lin.omega_m + 2 * lin.Lambda);

  fp.beta = 40.0;
  fp.alpha = {0.0, 1000.0};
  p.delta_a = 3.0;
  lin = linearize(p, fp);
  CHECK(lin.Lambda == doctest::Approx(3e-4 * 6401));
  CHECK(lin.G == doctest::Approx(0.1));
  CHECK(lin.Delta_a == doctest::Approx(3.0 - 2 * 1e-4 * 40));
  CHECK(omega_prime(lin.Lambda, 1.0) == doctest::Approx(2.95).epsilon(0.005));
}

TEST_CASE("optimal detuning: eta = 0 gives the sideband condition") {
  SystemParams p;
  p.eta = 0.0;
  p.drive_amplitude = 300.0;
  p.detuning = DetuningMode::Optimal;
  const auto op = solve_operating_point(p);
  CHECK(op.linear.Delta_a == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("optimal detuning: agrees with a dense scan of delta_a") {
  SystemParams p = fig2_params();
  p.detuning = DetuningMode::Optimal;
  const auto op = solve_operating_point(p, continuation());
  const auto tm = transformed_model(op.linear);
  CHECK(std::abs(op.linear.Delta_a - tm.omega_m_prime) < 1e-8);

  // grid oracle: minimize |Delta_a - omega'| over delta_a in [1, 6]
  SystemParams q = p;
  q.detuning = DetuningMode::Fixed;
  double best = 0.0;
  double best_gap = std::numeric_limits<double>::infinity();
  const int n = 5000;
  for (int i = 0; i <= n; ++i) {
    q.delta_a = 1.0 + 5.0 * i / n;
    const auto fp = solve_classical_fixed_point(q, continuation());
    const auto lin = linearize(q, fp);
    const double gap = std::abs(lin.Delta_a - omega_prime(lin.Lambda, 1.0));
    if (gap < best_gap) {
      best_gap = gap;
      best = q.delta_a;
    }
  }
  CHECK(std::abs(op.params.delta_a - best) <= 5.0 / n);
}

TEST_CASE("fig. 2 reference point") {
  SystemParams p = fig2_params();
  p.detuning = DetuningMode::Optimal;
  const auto op = solve_operating_point(p, continuation());
  const double a = std::abs(op.fixed_point.alpha);
  CHECK(a > 500.0);
  CHECK(a < 2000.0);
  CHECK(op.fixed_point.beta > 20.0);
  CHECK(op.fixed_point.beta < 80.0);
  // regression, frozen from this build
  CHECK(op.fixed_point.beta == doctest::Approx(31.674).epsilon(1e-3));
  CHECK(a == doctest::Approx(908.59).epsilon(1e-3));
}

TEST_CASE("optimal detuning is found above the stability threshold") {
  SystemParams p;
  p.g0 = 0.1;
  p.detuning = DetuningMode::Optimal;
  for (double om : {20.0, 200.0, 2000.0}) {
    p.drive_amplitude = om;
    const auto op = solve_operating_point(p);
    CHECK(std::abs(op.linear.Delta_a - omega_prime(op.linear.Lambda, 1.0)) < 1e-8);
    CHECK(op.fixed_point.residual <= 1e-11);
  }
}

TEST_CASE("optimal detuning with the ancilla cavity") {
  SystemParams p = fig2_params();
  p.detuning = DetuningMode::Optimal;
  p.detection = DetectionParams{1.0, 1e-4, 0.1, 49.0};
  const auto op = solve_operating_point(p);
  CHECK(std::abs(op.linear.Delta_a - omega_prime(op.linear.Lambda, 1.0)) < 1e-8);
  REQUIRE(op.fixed_point.alpha_s.has_value());
  const double Ds = 1.0 - 2e-4 * op.fixed_point.beta;
  CHECK(std::norm(*op.fixed_point.alpha_s) ==
        doctest::Approx(49.0 * 49.0 / (Ds * Ds + 0.0025)).epsilon(1e-10));
}
