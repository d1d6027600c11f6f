#pragma once

#include <vector>

#include <Eigen/Dense>

#include "optosqueeze/steadystate.hpp"

namespace optosqueeze {

/// Linear quadrature dynamics dR/dt = A R + noise over
/// R = (x_a, p_a, x_b, p_b[, x_s, p_s]), x = (o + o^dag)/sqrt 2.
struct QuadratureSystem {
  Eigen::MatrixXd drift;      ///< A_q
  Eigen::MatrixXd diffusion;  ///< D, symmetric positive semidefinite

  Eigen::Index modes() const { return drift.rows() / 2; }
};

/// Symmetrized covariance V_ij = <{dR_i, dR_j}>/2; vacuum has V = I/2.
struct CovarianceState {
  Eigen::MatrixXd V;
};

/// Index of x_b in the quadrature vector.
inline constexpr Eigen::Index kMechanicalX = 2;

QuadratureSystem build_quadrature_system(const LinearizedModel& lin);

/// Solves A V + V A^T + D = 0. Throws StabilityError if A has an eigenvalue
/// with nonnegative real part, NumericError if the normwise backward error
/// exceeds 1e-10.
CovarianceState solve_lyapunov(const QuadratureSystem& sys);

/// Integrates dV/dt = A V + V A^T + D from V(0) = I/2 with classic RK4.
/// Cross-checking aid only; convergence time is set by the slowest decay rate.
CovarianceState integrate_lyapunov(const QuadratureSystem& sys, double t_end, double dt);

/// Steady-state variance of X = (b + b^dag)/sqrt 2.
double position_variance(const CovarianceState& state);

/// -10 log10(variance / (1/2)); positive means below the vacuum level.
double squeezing_db(double variance);

/// 4 G_s^2 / kappa_s.
double detection_cooling_rate(double G_s, double kappa_s);

/// Symplectic eigenvalues of V (each listed once), ascending.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& V);

struct PhysicalityReport {
  double asymmetry = 0.0;           ///< max |V - V^T|
  double min_eigenvalue = 0.0;      ///< smallest eigenvalue of V
  double min_symplectic = 0.0;      ///< smallest symplectic eigenvalue
  double lyapunov_residual = 0.0;   ///< ||A V + V A^T + D||_F / ||D||_F
  double backward_error = 0.0;      ///< ||A V + V A^T + D||_F / (2 ||A|| ||V|| + ||D||)
  bool ok = false;                  ///< all four checks, residual against ||D||
};

PhysicalityReport check_physicality(const QuadratureSystem& sys, const CovarianceState& state);

/// Convenience: build, solve and return the mechanical position variance.
double steady_state_variance(const LinearizedModel& lin);

}  // namespace optosqueeze
