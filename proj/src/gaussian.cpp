#include "optosqueeze/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/stability.hpp"

namespace optosqueeze {

namespace {

void set_cavity_block(Eigen::MatrixXd& A, Eigen::MatrixXd& D, Eigen::Index i, double detuning,
                      double kappa) {
  A(i, i) = -kappa / 2.0;
  A(i, i + 1) = detuning;
  A(i + 1, i) = -detuning;
  A(i + 1, i + 1) = -kappa / 2.0;
  D(i, i) = kappa / 2.0;
  D(i + 1, i + 1) = kappa / 2.0;
}

// Diagonal symplectic scaling that equalizes |A(x,p)| and |A(p,x)| in every
// mode. Strong parametric stiffening makes x_b and p_b differ by orders of
// magnitude; the balanced problem is the one in the squeezed frame.
Eigen::VectorXd balancing_scales(const Eigen::MatrixXd& A) {
  Eigen::VectorXd s = Eigen::VectorXd::Ones(A.rows());
  for (Eigen::Index i = 0; i + 1 < A.rows(); i += 2) {
    const double a12 = std::abs(A(i, i + 1));
    const double a21 = std::abs(A(i + 1, i));
    if (a12 > 0.0 && a21 > 0.0) {
      const double sx = std::pow(a21 / a12, 0.25);
      s(i) = sx;
      s(i + 1) = 1.0 / sx;
    }
  }
  return s;
}

Eigen::MatrixXd lyapunov_lhs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& V,
                             const Eigen::MatrixXd& D) {
  return A * V + V * A.transpose() + D;
}

Eigen::MatrixXd extended_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& V,
                                  const Eigen::MatrixXd& D) {
  using Ext = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const Ext a = A.cast<long double>();
  const Ext v = V.cast<long double>();
  const Ext r = a * v + v * a.transpose() + D.cast<long double>();
  return r.cast<double>();
}

}  // namespace

QuadratureSystem build_quadrature_system(const LinearizedModel& lin) {
  const Eigen::Index n = lin.has_detection() ? 6 : 4;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);

  set_cavity_block(A, D, 0, lin.Delta_a, lin.kappa);
  A(1, 2) = 2.0 * lin.G;

  A(2, 2) = -lin.gamma / 2.0;
  A(2, 3) = lin.omega_m_tilde - 2.0 * lin.Lambda;
  A(3, 2) = -(lin.omega_m_tilde + 2.0 * lin.Lambda);
  A(3, 3) = -lin.gamma / 2.0;
  A(3, 0) = 2.0 * lin.G;
  const double thermal = lin.gamma * (2.0 * lin.n_th + 1.0) / 2.0;
  D(2, 2) = thermal;
  D(3, 3) = thermal;

  if (lin.has_detection()) {
    set_cavity_block(A, D, 4, *lin.Delta_s, *lin.kappa_s);
    A(5, 2) = 2.0 * *lin.G_s;
    A(3, 4) = 2.0 * *lin.G_s;
  }
  return QuadratureSystem{std::move(A), std::move(D)};
}

CovarianceState solve_lyapunov(const QuadratureSystem& sys) {
  const Eigen::Index n = sys.drift.rows();
  if (sys.drift.cols() != n || sys.diffusion.rows() != n || sys.diffusion.cols() != n) {
    throw DomainError("solve_lyapunov: drift and diffusion must be square and equal-sized");
  }
  const Eigen::VectorXd s = balancing_scales(sys.drift);
  const Eigen::MatrixXd A = s.asDiagonal() * sys.drift * s.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd D = s.asDiagonal() * sys.diffusion * s.asDiagonal();

  const EigenVerdict verdict = is_stable_eigen(A);
  if (!verdict.stable) {
    throw StabilityError("solve_lyapunov: drift matrix is not stable (max Re lambda = " +
                         std::to_string(-verdict.margin) + ")");
  }

  // (I kron A + A kron I) vec(V) = -vec(D), column-major vec. The system is
  // tiny but can be badly conditioned near the stability boundary, so it is
  // factored with full pivoting in long double.
  using Ext = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using ExtVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const Eigen::Index n2 = n * n;
  Ext K = Ext::Zero(n2, n2);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = j * n + i;
      for (Eigen::Index k = 0; k < n; ++k) {
        K(row, j * n + k) += A(i, k);  // (A V)_ij
        K(row, k * n + i) += A(j, k);  // (V A^T)_ij
      }
    }
  }
  const Eigen::FullPivLU<Ext> lu(K);
  const Ext Dx = D.cast<long double>();
  ExtVec x = lu.solve(ExtVec(-Eigen::Map<const ExtVec>(Dx.data(), n2)));
  x += lu.solve(ExtVec(-Eigen::Map<const ExtVec>(Dx.data(), n2) - K * x));

  const Ext Vb = Eigen::Map<const Ext>(x.data(), n, n);
  const Ext s_inv = s.cwiseInverse().cast<long double>().asDiagonal();
  const Ext Vx = s_inv * Vb * s_inv;
  Eigen::MatrixXd V = (0.5L * (Vx + Vx.transpose())).cast<double>();
  const double best = extended_residual(sys.drift, V, sys.diffusion).norm();

  // Normwise backward error; the plain ratio to |D| is dominated by roundoff in
  // A V once the squeezed frequency is large.
  const double scale = 2.0 * sys.drift.norm() * V.norm() + sys.diffusion.norm();
  const double residual = best / std::max(scale, std::numeric_limits<double>::min());
  if (!std::isfinite(residual) || residual > 1e-10) {
    throw NumericError("solve_lyapunov: residual " + std::to_string(residual) + " above 1e-10");
  }
  return CovarianceState{V};
}

CovarianceState integrate_lyapunov(const QuadratureSystem& sys, double t_end, double dt) {
  if (!(dt > 0.0) || t_end < 0.0) {
    throw DomainError("integrate_lyapunov: need dt > 0 and t_end >= 0");
  }
  const auto& A = sys.drift;
  const auto& D = sys.diffusion;
  const auto rhs = [&](const Eigen::MatrixXd& V) { return lyapunov_lhs(A, V, D); };
  Eigen::MatrixXd V = 0.5 * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const auto steps = static_cast<long>(std::ceil(t_end / dt));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;
  for (long k = 0; k < steps; ++k) {
    const Eigen::MatrixXd k1 = rhs(V);
    const Eigen::MatrixXd k2 = rhs(V + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = rhs(V + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = rhs(V + h * k3);
    V += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return CovarianceState{0.5 * (V + V.transpose())};
}

double position_variance(const CovarianceState& state) {
  return state.V(kMechanicalX, kMechanicalX);
}

double squeezing_db(double variance) {
  if (!(variance > 0.0)) {
    throw DomainError("squeezing_db: variance must be positive");
  }
  return -10.0 * std::log10(variance / 0.5);
}

double detection_cooling_rate(double G_s, double kappa_s) {
  if (!(kappa_s > 0.0)) {
    throw DomainError("detection_cooling_rate: kappa_s must be positive");
  }
  return 4.0 * G_s * G_s / kappa_s;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& V) {
  const Eigen::Index n = V.rows();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; i += 2) {
    omega(i, i + 1) = 1.0;
    omega(i + 1, i) = -1.0;
  }
  // Eigenvalues of Omega V are +-i nu_k.
  Eigen::EigenSolver<Eigen::MatrixXd> es(omega * V, false);
  std::vector<double> nus;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    nus.push_back(std::abs(es.eigenvalues()[i].imag()));
  }
  std::sort(nus.begin(), nus.end());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < nus.size(); i += 2) {
    out.push_back(0.5 * (nus[i] + nus[i + 1]));
  }
  return out;
}

PhysicalityReport check_physicality(const QuadratureSystem& sys, const CovarianceState& state) {
  PhysicalityReport rep;
  const auto& V = state.V;
  rep.asymmetry = (V - V.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (V + V.transpose()),
                                                     Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  const auto nus = symplectic_eigenvalues(V);
  rep.min_symplectic = nus.empty() ? 0.0 : nus.front();
  const double rnorm = extended_residual(sys.drift, V, sys.diffusion).norm();
  rep.lyapunov_residual = rnorm / sys.diffusion.norm();
  rep.backward_error = rnorm / (2.0 * sys.drift.norm() * V.norm() + sys.diffusion.norm());
  rep.ok = rep.asymmetry < 1e-12 && rep.min_eigenvalue > 0.0 && rep.min_symplectic >= 0.5 - 1e-9 &&
           rep.lyapunov_residual < 1e-10;
  return rep;
}

double steady_state_variance(const LinearizedModel& lin) {
  return position_variance(solve_lyapunov(build_quadrature_system(lin)));
}

}  // namespace optosqueeze
