#include <doctest.h>

#include <cmath>
#include <complex>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/fock.hpp"
#include "optosqueeze/gaussian.hpp"
#include "optosqueeze/steadystate.hpp"
#include "optosqueeze/transform.hpp"

using namespace optosqueeze;
using cd = std::complex<double>;

namespace {

struct Desk {
  OperatingPoint op;
  double gaussian = 0.0;
};

// Desk-scale point: beta and |alpha| of order 1-10.
Desk desk_point(double drive, double n_th) {
  SystemParams p;
  p.eta = 0.005;
  p.g0 = 0.01;
  p.kappa = 0.3;
  p.gamma = 0.01;
  p.n_th = n_th;
  p.drive_amplitude = drive;
  p.detuning = DetuningMode::Optimal;
  FixedPointOptions o;
  o.branch = BranchSelection::Continuation;
  Desk d;
  d.op = solve_operating_point(p, o);
  d.gaussian = steady_state_variance(d.op.linear);
  return d;
}

FockSteadyState fock(const Desk& d, FockConfig cfg) {
  const auto L = build_liouvillian(d.op.linear, d.op.params, d.op.fixed_point, cfg);
  return steady_state(L);
}

double observed_variance(const FockSteadyState& st, const Desk& d, Frame frame) {
  if (frame == Frame::Shifted) {
    return st.variance_X;
  }
  return variance_in_original_frame(st, transformed_model(d.op.linear).r);
}

Eigen::MatrixXcd thermal(int n, double nbar) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  double norm = 0.0;
  for (int k = 0; k < n; ++k) {
    const double p = std::pow(nbar / (1.0 + nbar), k);
    rho(k, k) = p;
    norm += p;
  }
  return rho / norm;
}

FockSteadyState single_mode_state(const Eigen::MatrixXcd& rho) {
  FockSteadyState st;
  st.rho = rho;
  st.dims = {static_cast<int>(rho.rows())};
  st.observed_mode = 0;
  return st;
}

}  // namespace

TEST_CASE("annihilation operator") {
  const Eigen::MatrixXcd a = Eigen::MatrixXcd(annihilation(5));
  for (int n = 1; n < 5; ++n) {
    CHECK(std::abs(a(n - 1, n) - std::sqrt(double(n))) < 1e-15);
  }
  CHECK(std::abs(a(0, 0)) == 0.0);
}

TEST_CASE("damped mode with vacuum bath relaxes to the ground state") {
  const auto st = steady_state(damped_oscillator(8, 1.0, 0.1, 0.0));
  CHECK(std::abs(st.rho(0, 0) - 1.0) < 1e-12);
  CHECK(st.rho.diagonal().tail(7).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(st.variance_X == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("thermal bath gives Bose-Einstein populations") {
  const auto st = steady_state(damped_oscillator(40, 1.0, 0.1, 0.5));
  for (int k = 0; k < 10; ++k) {
    CHECK(st.rho(k, k).real() == doctest::Approx(2.0 / 3.0 * std::pow(1.0 / 3.0, k)).epsilon(1e-9));
  }
  CHECK(st.trace_error < 1e-8);
  CHECK(st.cutoff_converged);
  CHECK(st.variance_X == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("thermal occupation recovered once the cutoff is large") {
  const double nbar = 2.0;
  const auto st = steady_state(damped_oscillator(80, 1.0, 0.05, nbar));
  double n = 0.0;
  for (int k = 0; k < 80; ++k) {
    n += k * st.rho(k, k).real();
  }
  CHECK(n == doctest::Approx(nbar).epsilon(1e-8));
}

TEST_CASE("cutoff sweep on a thermal mode") {
  const auto rep = cutoff_sweep(
      [](int, int nm) { return damped_oscillator(nm, 1.0, 0.1, 1.0); },
      {{2, 10}, {2, 20}, {2, 40}, {2, 60}});
  REQUIRE(rep.points.size() == 4);
  CHECK(rep.converged);
  CHECK(rep.points.back().variance_X == doctest::Approx(1.5).epsilon(1e-6));
  CHECK_THROWS_AS(cutoff_sweep([](int, int nm) { return damped_oscillator(nm, 1, 0.1, 0); },
                               {{2, 20}, {2, 10}}),
                  DomainError);
}

TEST_CASE("variance in the original frame") {
  const double r = 0.37;
  const auto vac = single_mode_state(thermal(30, 0.0));
  CHECK(variance_in_original_frame(vac, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(variance_in_original_frame(vac, r) == doctest::Approx(std::exp(-2 * r) / 2).epsilon(1e-12));
  const auto th = single_mode_state(thermal(120, 0.8));
  CHECK(variance_in_original_frame(th, r) ==
        doctest::Approx((0.8 + 0.5) * std::exp(-2 * r)).epsilon(1e-9));
}

TEST_CASE("linear desk point matches the Lyapunov variance") {
  const Desk d = desk_point(20.0, 0.0);
  FockConfig cfg;
  cfg.n_cav = 5;
  cfg.n_mech = 12;
  const auto st = fock(d, cfg);
  CHECK(st.trace_error < 1e-8);
  CHECK(st.hermiticity_error < 1e-8);
  CHECK(st.min_eigenvalue > -1e-8);
  CHECK(std::abs(st.variance_X - d.gaussian) / d.gaussian < 0.01);
}

TEST_CASE("shifted and squeezed frames agree without RWA") {
  const Desk d = desk_point(40.0, 0.2);
  FockConfig cfg;
  cfg.n_cav = 5;
  cfg.n_mech = 16;
  const double shifted = observed_variance(fock(d, cfg), d, Frame::Shifted);
  cfg.frame = Frame::ShiftedAndSqueezed;
  cfg.n_mech = 14;
  const double squeezed = observed_variance(fock(d, cfg), d, Frame::ShiftedAndSqueezed);
  CHECK(std::abs(shifted - d.gaussian) / d.gaussian < 1e-3);
  CHECK(std::abs(squeezed - shifted) / shifted < 1e-3);
}

TEST_CASE("frame equivalence at matched truncation is exact") {
  // With r small and generous cutoffs both frames converge to the same state.
  const Desk d = desk_point(10.0, 0.0);
  FockConfig cfg;
  cfg.n_cav = 4;
  cfg.n_mech = 14;
  const double shifted = observed_variance(fock(d, cfg), d, Frame::Shifted);
  cfg.frame = Frame::ShiftedAndSqueezed;
  const double squeezed = observed_variance(fock(d, cfg), d, Frame::ShiftedAndSqueezed);
  CHECK(std::abs(squeezed - shifted) / shifted < 1e-6);
}

TEST_CASE("RWA in the squeezed frame is harmless well inside its regime") {
  const Desk d = desk_point(40.0, 0.0);
  const auto t = transformed_model(d.op.linear);
  REQUIRE(t.omega_m_prime >= 10 * std::max(t.G_prime, d.op.linear.gamma * (t.n_th_prime + 1)));
  FockConfig cfg;
  cfg.n_cav = 5;
  cfg.n_mech = 10;
  cfg.frame = Frame::ShiftedAndSqueezed;
  const double full = observed_variance(fock(d, cfg), d, cfg.frame);
  cfg.rwa = true;
  const double rwa = observed_variance(fock(d, cfg), d, cfg.frame);
  CHECK(std::abs(rwa - full) / full < 0.01);
}

TEST_CASE("nonlinear remainder is a small correction at desk scale") {
  const Desk d = desk_point(20.0, 0.0);
  FockConfig cfg;
  cfg.n_cav = 5;
  cfg.n_mech = 14;
  cfg.include_nl = true;
  const auto st = fock(d, cfg);
  CHECK(st.trace_error < 1e-8);
  CHECK(std::abs(st.variance_X - d.gaussian) / d.gaussian < 0.05);
}

TEST_CASE("builder limits") {
  const Desk d = desk_point(5.0, 0.0);
  FockConfig cfg;
  cfg.n_cav = 1;
  CHECK_THROWS_AS(build_liouvillian(d.op.linear, d.op.params, d.op.fixed_point, cfg), DomainError);
  cfg.n_cav = 30;
  cfg.n_mech = 40;
  cfg.max_superoperator_dim = 250000;
  CHECK_THROWS_AS(build_liouvillian(d.op.linear, d.op.params, d.op.fixed_point, cfg), CapacityError);
  cfg.n_cav = 3;
  cfg.n_mech = 3;
  cfg.include_detection = true;
  CHECK_THROWS_AS(build_liouvillian(d.op.linear, d.op.params, d.op.fixed_point, cfg), DomainError);
}

TEST_CASE("Liouvillian preserves trace") {
  const Desk d = desk_point(10.0, 0.3);
  FockConfig cfg;
  cfg.n_cav = 3;
  cfg.n_mech = 5;
  cfg.include_nl = true;
  const auto L = build_liouvillian(d.op.linear, d.op.params, d.op.fixed_point, cfg);
  const int n = L.hilbert_dim();
  // Tr(L[rho]) = 0 for every rho: the trace functional annihilates every column.
  Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    tr(static_cast<Eigen::Index>(i) * n + i) = 1.0;
  }
  const Eigen::RowVectorXcd out = tr * L.L;
  CHECK(out.cwiseAbs().maxCoeff() < 1e-12);
}
