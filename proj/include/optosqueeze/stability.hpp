#pragma once

#include <Eigen/Dense>

#include "optosqueeze/steadystate.hpp"

namespace optosqueeze {

/// Drift matrix of the linear Langevin equations dR/dt = A R - R_in over the
/// ordered operator basis R = (a^dag, a, b^dag, b).
struct DriftMatrixC {
  Eigen::Matrix4cd entries;
};

DriftMatrixC drift_matrix(const LinearizedModel& lin);

/// Similarity V that mixes (b^dag, b) with cosh r / -sinh r.
Eigen::Matrix4cd squeezing_similarity(double r);

/// V^-1 A V with r = squeezing_parameter(Lambda, omega_m). The anomalous
/// mechanical entries vanish and the couplings become G'.
DriftMatrixC transformed_drift_matrix(const LinearizedModel& lin);

struct EigenVerdict {
  bool stable = false;
  double margin = 0.0;  ///< -max Re(lambda)
};

EigenVerdict is_stable_eigen(const DriftMatrixC& m);
EigenVerdict is_stable_eigen(const Eigen::MatrixXd& real_drift);

enum class CriterionVerdict { Stable, Unstable, NotApplicable };

/// Closed-form red-detuned criterion 16 G^2 < (omega_m + 4 Lambda)(4 Delta_a + kappa^2/Delta_a),
/// valid after dropping mechanical damping. NotApplicable for Delta_a <= 0.
CriterionVerdict is_stable_criterion(const LinearizedModel& lin);

/// Damping-retaining form in the transformed variables:
/// 4 omega' G'^2 Delta_a - (omega'^2 + gamma^2/4)(Delta_a^2 + kappa^2/4) < 0.
CriterionVerdict is_stable_criterion_with_damping(const LinearizedModel& lin);

/// (omega_m + 4 Lambda)(4 Delta_a + kappa^2/Delta_a) - 16 G^2; positive when stable.
double criterion_slack(const LinearizedModel& lin);

/// sqrt(27 omega_m eta): largest g0 that stays stable at the optimal detuning
/// in the strong-drive limit, independent of drive power.
double optimal_point_threshold(double omega_m, double eta);

const char* to_string(CriterionVerdict v);

}  // namespace optosqueeze
