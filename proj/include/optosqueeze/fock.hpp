#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "optosqueeze/model.hpp"
#include "optosqueeze/steadystate.hpp"

namespace optosqueeze {

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>>;

enum class Frame {
  Shifted,             ///< fluctuations about (alpha, beta)
  ShiftedAndSqueezed,  ///< additionally rotated by S(r); rho' = S^dag rho S
};

struct FockConfig {
  int n_cav = 6;
  int n_mech = 20;
  int n_anc = 3;
  bool include_nl = false;         ///< keep the cubic/quartic remainder of the shifted Hamiltonian
  Frame frame = Frame::Shifted;
  bool include_detection = false;  ///< add the ancilla cavity as a third mode
  bool rwa = false;                ///< squeezed frame only: drop the G[b], G[b^dag] terms
  std::size_t max_superoperator_dim = 250000;
};

/// One dissipative term rate * (L rho R - (R L rho + rho R L)/2).
/// D[o] is (o, o^dag); G[o] is (o, o).
struct JumpTerm {
  double rate = 0.0;
  SparseMatrixC left;
  SparseMatrixC right;
};

JumpTerm dissipator(double rate, const SparseMatrixC& op);
JumpTerm squeezing_dissipator(double rate, const SparseMatrixC& op);

/// Column-stacked superoperator of -i[H, .] + sum of jump terms.
SparseMatrixC lindblad_superoperator(const SparseMatrixC& H, const std::vector<JumpTerm>& terms);

/// Truncated annihilation operator on n levels.
SparseMatrixC annihilation(int n);

/// Superoperator plus what is needed to interpret its kernel.
struct Liouvillian {
  SparseMatrixC L;
  std::vector<int> dims;        ///< tensor factors, first index slowest
  std::size_t observed_mode = 0;
  Eigen::MatrixXcd position;    ///< original-frame X on the observed factor
  Eigen::MatrixXcd position_sq; ///< original-frame X^2 on the observed factor
  Frame frame = Frame::Shifted;
  double r = 0.0;

  int hilbert_dim() const;
};

/// Shifted-frame master equation with the linearized (and optionally the full
/// nonlinear) Hamiltonian. Throws CapacityError when the superoperator would
/// exceed cfg.max_superoperator_dim.
Liouvillian build_liouvillian(const LinearizedModel& lin, const SystemParams& params,
                              const ClassicalFixedPoint& fp, const FockConfig& cfg);

/// Single oscillator omega b^dag b with thermal damping. Test and calibration aid.
Liouvillian damped_oscillator(int levels, double omega, double gamma, double n_th);

struct FockSteadyState {
  Eigen::MatrixXcd rho;
  std::vector<int> dims;
  std::size_t observed_mode = 0;
  double trace_error = 0.0;
  double hermiticity_error = 0.0;       ///< max |rho - rho^dag| before symmetrization
  double min_eigenvalue = 0.0;
  std::vector<double> top_population;   ///< population of the highest level, per mode
  bool cutoff_converged = false;        ///< every top population below 1e-6
  double variance_X = 0.0;              ///< original (unsqueezed) frame
  double mean_X = 0.0;
};

/// Kernel of L with unit trace; one row of the linear system is replaced by the
/// trace functional and the result Hermitized. Throws NumericError.
FockSteadyState steady_state(const Liouvillian& L);

/// Reduced density matrix of one tensor factor.
Eigen::MatrixXcd reduced_state(const FockSteadyState& state, std::size_t mode);

/// <dX^2> of the observed mode for a state obtained in the squeezed frame,
/// using S^dag b S = b cosh r - b^dag sinh r.
double variance_in_original_frame(const FockSteadyState& state, double r);

struct CutoffPoint {
  int n_cav = 0;
  int n_mech = 0;
  double variance_X = 0.0;
  double trace_error = 0.0;
  double max_top_population = 0.0;
};

struct CutoffSweepReport {
  std::vector<CutoffPoint> points;
  bool converged = false;  ///< last two variances agree to 0.1 %
};

using LiouvillianBuilder = std::function<Liouvillian(int n_cav, int n_mech)>;

CutoffSweepReport cutoff_sweep(const LiouvillianBuilder& build,
                               const std::vector<std::pair<int, int>>& schedule);

}  // namespace optosqueeze
