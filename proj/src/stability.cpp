#include "optosqueeze/stability.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/transform.hpp"

namespace optosqueeze {

namespace {
using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

EigenVerdict verdict_from(const Eigen::VectorXcd& eigenvalues) {
  if (!eigenvalues.allFinite()) {
    throw NumericError("eigensolver returned non-finite eigenvalues");
  }
  double max_re = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    max_re = std::max(max_re, eigenvalues[i].real());
  }
  return EigenVerdict{max_re < 0.0, -max_re};
}
}  // namespace

DriftMatrixC drift_matrix(const LinearizedModel& lin) {
  const double D = lin.Delta_a;
  const double w = lin.omega_m_tilde;
  const double L = lin.Lambda;
  const double G = lin.G;
  const double k = lin.kappa;
  const double g = lin.gamma;

  DriftMatrixC m;
  m.entries << I * D - k / 2.0, 0.0, -I * G, -I * G,
               0.0, -I * D - k / 2.0, I * G, I * G,
               -I * G, -I * G, I * w - g / 2.0, 2.0 * I * L,
               I * G, I * G, -2.0 * I * L, -I * w - g / 2.0;
  return m;
}

Eigen::Matrix4cd squeezing_similarity(double r) {
  Eigen::Matrix4cd v = Eigen::Matrix4cd::Identity();
  v(2, 2) = std::cosh(r);
  v(2, 3) = -std::sinh(r);
  v(3, 2) = -std::sinh(r);
  v(3, 3) = std::cosh(r);
  return v;
}

DriftMatrixC transformed_drift_matrix(const LinearizedModel& lin) {
  const double r = squeezing_parameter(lin.Lambda, lin.omega_m);
  const Eigen::Matrix4cd v = squeezing_similarity(r);
  // V^-1 = V(-r)
  const Eigen::Matrix4cd v_inv = squeezing_similarity(-r);
  return DriftMatrixC{v_inv * drift_matrix(lin).entries * v};
}

EigenVerdict is_stable_eigen(const DriftMatrixC& m) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m.entries, false);
  if (es.info() != Eigen::Success) {
    throw NumericError("complex eigensolver failed");
  }
  return verdict_from(es.eigenvalues());
}

EigenVerdict is_stable_eigen(const Eigen::MatrixXd& real_drift) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(real_drift, false);
  if (es.info() != Eigen::Success) {
    throw NumericError("real eigensolver failed");
  }
  return verdict_from(es.eigenvalues());
}

double criterion_slack(const LinearizedModel& lin) {
  const double D = lin.Delta_a;
  return (lin.omega_m + 4.0 * lin.Lambda) * (4.0 * D + lin.kappa * lin.kappa / D) -
         16.0 * lin.G * lin.G;
}

CriterionVerdict is_stable_criterion(const LinearizedModel& lin) {
  if (!(lin.Delta_a > 0.0)) {
    return CriterionVerdict::NotApplicable;
  }
  return criterion_slack(lin) > 0.0 ? CriterionVerdict::Stable : CriterionVerdict::Unstable;
}

CriterionVerdict is_stable_criterion_with_damping(const LinearizedModel& lin) {
  if (!(lin.Delta_a > 0.0)) {
    return CriterionVerdict::NotApplicable;
  }
  const TransformedModel t = transformed_model(lin);
  const double D = lin.Delta_a;
  const double wp = t.omega_m_prime;
  const double lhs = 4.0 * wp * t.G_prime * t.G_prime * D -
                     (wp * wp + lin.gamma * lin.gamma / 4.0) * (D * D + lin.kappa * lin.kappa / 4.0);
  return lhs < 0.0 ? CriterionVerdict::Stable : CriterionVerdict::Unstable;
}

double optimal_point_threshold(double omega_m, double eta) {
  if (omega_m < 0.0 || eta < 0.0) {
    throw DomainError("optimal_point_threshold: omega_m and eta must be nonnegative");
  }
  return std::sqrt(27.0 * omega_m * eta);
}

const char* to_string(CriterionVerdict v) {
  switch (v) {
    case CriterionVerdict::Stable:
      return "stable";
    case CriterionVerdict::Unstable:
      return "unstable";
    case CriterionVerdict::NotApplicable:
      return "not-applicable";
  }
  return "unknown";
}

}  // namespace optosqueeze
