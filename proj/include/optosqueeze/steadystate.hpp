#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "optosqueeze/model.hpp"

namespace optosqueeze {

/// Classical steady-state amplitudes about which the quantum fluctuations are
/// linearized.
struct ClassicalFixedPoint {
  std::complex<double> alpha{0.0, 0.0};
  double beta = 0.0;
  std::optional<std::complex<double>> alpha_s;
  int iterations = 0;
  /// Largest scaled residual |lhs - rhs| / max(1, |largest term|) over the
  /// amplitude equations.
  double residual = 0.0;
};

/// Coefficients of the quadratic (shifted-frame) Hamiltonian
///   Delta_a a^dag a + omega_m_tilde b^dag b + Lambda (b^2 + b^dag^2)
///   - G (a + a^dag)(b + b^dag)   [- G_s (a_s + a_s^dag)(b + b^dag) + Delta_s a_s^dag a_s]
/// together with the damping constants needed downstream.
struct LinearizedModel {
  double Delta_a = 1.0;
  double omega_m_tilde = 1.0;
  double Lambda = 0.0;
  double G = 0.0;
  std::optional<double> Delta_s;
  std::optional<double> G_s;
  std::optional<double> kappa_s;
  double kappa = 0.1;
  double gamma = 1e-6;
  double n_th = 0.0;
  double omega_m = 1.0;

  bool has_detection() const { return Delta_s.has_value() && G_s.has_value() && kappa_s.has_value(); }
};

enum class BranchSelection {
  RequireUnique,  ///< error if more than one locally stable branch exists
  Continuation,   ///< follow the branch connected to zero drive
};

struct FixedPointOptions {
  double tolerance = 1e-12;
  int max_iterations = 500;
  BranchSelection branch = BranchSelection::RequireUnique;
  int continuation_steps = 200;
};

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0, ascending, duplicates merged.
/// Degenerate leading coefficients reduce the degree.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

/// Solves the amplitude equations
///   [-i(delta_a - 2 g0 beta) - kappa/2] alpha - i Omega_d = 0
///   M(beta) = g0 |alpha|^2 (+ g_s |alpha_s|^2 with detection)
/// with M(beta) = 16 eta beta^3 + (12 eta + omega_m) beta (Duffing) or
/// 12 eta beta^2 + omega_m beta + 3 eta (cubic). Mechanical damping terms are
/// dropped. Throws ConvergenceError or BranchAmbiguityError.
ClassicalFixedPoint solve_classical_fixed_point(const SystemParams& params,
                                                const FixedPointOptions& options = {});

/// All locally stable classical branches at the given parameters, ascending in beta.
std::vector<double> admissible_branches(const SystemParams& params);

LinearizedModel linearize(const SystemParams& params, const ClassicalFixedPoint& fp);

struct OperatingPoint {
  SystemParams params;  ///< delta_a resolved, detuning mode Fixed
  ClassicalFixedPoint fixed_point;
  LinearizedModel linear;
};

/// Finds delta_a such that Delta_a = omega_m' holds at the self-consistent
/// fixed point. |Delta_a - omega_m'| < detuning_tolerance on return.
OperatingPoint solve_at_optimal_detuning(const SystemParams& params,
                                         const FixedPointOptions& options = {},
                                         double detuning_tolerance = 1e-8);

/// Dispatches on params.detuning.
OperatingPoint solve_operating_point(const SystemParams& params,
                                     const FixedPointOptions& options = {});

}  // namespace optosqueeze
