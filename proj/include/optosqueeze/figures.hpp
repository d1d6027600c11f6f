#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optosqueeze/fock.hpp"
#include "optosqueeze/model.hpp"
#include "optosqueeze/nonlin_gen.hpp"
#include "optosqueeze/stability.hpp"
#include "optosqueeze/steadystate.hpp"

namespace optosqueeze {

enum class Scale { Linear, Log };

struct Range {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  Scale scale = Scale::Linear;

  /// Throws DomainError unless points >= 2, start < stop, and start > 0 for log.
  void check() const;
  std::vector<double> values() const;
};

/// Output table: `#` header lines, column names, rows of preformatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// 12 significant digits, fixed across platforms.
std::string format_cell(double v);
void write_csv(std::ostream& out, const Table& table);

struct RunOptions {
  int jobs = 1;
  BranchSelection branch = BranchSelection::Continuation;
};

/// to_internal followed by solve_operating_point.
OperatingPoint solve_point(const SIInput& si, const RunOptions& opts = {});

/// Quadratic model at a prescribed Lambda and Delta_a. beta follows from
/// Lambda, and G from the classical balance g0 |alpha|^2 = M(beta), i.e. the
/// drive is whatever produces that beta.
LinearizedModel model_at_lambda(const SystemParams& params, double Lambda, double Delta_a);

// ---------------------------------------------------------------- fig. 2

struct Fig2Row {
  double P_w = 0.0;
  double delta_a = 0.0;
  double alpha_abs = 0.0;
  double beta = 0.0;
  double omega_m_prime_ratio = 0.0;
  double G_prime_over_G = 0.0;
  bool stable = false;
  std::optional<double> alpha_s_abs;         ///< detection run
  std::optional<double> beta_with_detection;
  std::string error;
};

std::vector<Fig2Row> run_fig2(const SIInput& si, const Range& power, const RunOptions& opts = {});
Table fig2_table(const SIInput& si, const std::vector<Fig2Row>& rows);

// ---------------------------------------------------------------- fig. 3

struct Fig3Spec {
  Range delta_a{0.1, 6.0, 100, Scale::Linear};
  Range lambda{0.05, 5.0, 100, Scale::Linear};
};

struct Fig3Point {
  double Delta_a = 0.0;
  double Lambda = 0.0;
  double omega_m_prime = 0.0;
  double G_prime = 0.0;
  bool stable = false;
  double variance = 0.0;  ///< meaningful only when stable
  double squeezing_db = 0.0;
};

struct Fig3Data {
  std::vector<Fig3Point> grid;      ///< Lambda-major, delta fastest
  std::vector<Fig3Point> optimal;   ///< Delta_a = omega_m'(Lambda), one per Lambda
  std::vector<Fig3Point> contour;   ///< variance = 1/4 crossings along Delta_a
  std::vector<double> delta_values;
  std::vector<double> lambda_values;
};

Fig3Data run_fig3(const SIInput& si, const Fig3Spec& spec, const RunOptions& opts = {});
Table fig3_table(const SIInput& si, const Fig3Data& data);

// ---------------------------------------------------------------- fig. 4

struct Fig4Spec {
  std::vector<double> powers_w{1e-5, 1e-4, 1e-3};  ///< series of variance vs n_th
  Range n_th{0.0, 1e4, 21, Scale::Linear};
  std::vector<double> n_th_values{0.0, 1e2, 1e4};   ///< series of variance vs P
  Range power{1e-6, 1e-2, 21, Scale::Log};
  bool analytic_overlay = true;
  bool thresholds = true;  ///< locate the 3 dB crossing in P for each n_th value
};

struct Fig4Row {
  std::string series;  ///< vs_n_th, vs_power or threshold_3db
  double P_w = 0.0;
  double n_th = 0.0;
  double delta_a = 0.0;
  bool stable = false;
  double variance = 0.0;
  double squeezing_db = 0.0;
  std::optional<double> analytic_variance;
  bool analytic_applicable = false;
  std::string error;
};

std::vector<Fig4Row> run_fig4(const SIInput& si, const Fig4Spec& spec, const RunOptions& opts = {});
Table fig4_table(const SIInput& si, const std::vector<Fig4Row>& rows);

/// Smallest P in [p_lo, p_hi] where the variance at optimal detuning falls to
/// 1/4, or nullopt when there is no crossing in the interval.
std::optional<double> threshold_power(const SIInput& si, double p_lo, double p_hi,
                                      const RunOptions& opts = {});

// ---------------------------------------------------------------- fig. 5

struct Fig5Spec {
  Range power{1e-9, 3e-8, 6, Scale::Log};
  FockConfig fock{6, 12, 3, true, Frame::ShiftedAndSqueezed, false, false, 250000};
  double Delta_s = 1.0;  ///< effective ancilla detuning, units of omega_m
};

struct Fig5Row {
  double P_w = 0.0;
  double drive_amplitude = 0.0;
  double delta_a = 0.0;
  bool stable = false;
  double variance_linear = 0.0;
  std::optional<double> variance_nl;
  std::optional<double> variance_detection;
  bool fock_converged = false;
  std::string error;
};

std::vector<Fig5Row> run_fig5(const SIInput& si, const Fig5Spec& spec, const RunOptions& opts = {});
Table fig5_table(const SIInput& si, const Fig5Spec& spec, const std::vector<Fig5Row>& rows);

/// Operating point with the ancilla detuning adjusted so that
/// delta_s - 2 g_s beta equals Delta_s.
OperatingPoint solve_with_ancilla_detuning(const SystemParams& params, double Delta_s,
                                           const FixedPointOptions& options = {});

// ---------------------------------------------------------------- sweeps

enum class SweepVariable { Power, Detuning, NTh, LambdaGrid };

struct SweepSpec {
  SweepVariable variable = SweepVariable::Power;
  Range range{1e-6, 1e-2, 21, Scale::Log};
  bool optimal_detuning = true;
  bool detection = false;
  bool include_nl = false;
  bool analytic_overlay = false;
  FockConfig fock{6, 12, 3, true, Frame::ShiftedAndSqueezed, false, false, 250000};
};

SweepVariable parse_sweep_variable(const std::string& name);
std::string to_string(SweepVariable v);

struct PointSummary {
  double value = 0.0;  ///< the swept quantity
  double delta_a = 0.0;
  double Delta_a = 0.0;
  double alpha_abs = 0.0;
  double beta = 0.0;
  double Lambda = 0.0;
  double G = 0.0;
  double r = 0.0;
  double omega_m_prime = 0.0;
  double G_prime = 0.0;
  double n_th_prime = 0.0;
  bool stable = false;
  double margin = 0.0;
  CriterionVerdict criterion = CriterionVerdict::NotApplicable;
  double variance = 0.0;
  double squeezing_db = 0.0;
  std::optional<double> analytic_cooling;
  bool cooling_applicable = false;
  std::optional<double> analytic_strong;
  bool strong_applicable = false;
  std::optional<double> variance_nl;
  std::optional<double> variance_detection;
  std::string error;
};

std::vector<PointSummary> run_sweep(const SIInput& si, const SweepSpec& spec,
                                    const RunOptions& opts = {});
Table sweep_table(const SIInput& si, const SweepSpec& spec, const std::vector<PointSummary>& rows);

// ---------------------------------------------------------------- stability scan

struct StabilityRow {
  double g0 = 0.0;
  double delta_a = 0.0;
  double Delta_a = 0.0;
  double omega_m_prime = 0.0;
  double G = 0.0;
  double margin = 0.0;
  bool stable_eigen = false;
  CriterionVerdict criterion = CriterionVerdict::NotApplicable;
  CriterionVerdict criterion_with_damping = CriterionVerdict::NotApplicable;
  bool below_threshold = false;  ///< g0 < sqrt(27 omega_m eta)
  std::string error;
};

std::vector<StabilityRow> run_stability_scan(const SIInput& si, const Range& g0,
                                             const RunOptions& opts = {});
Table stability_table(const SIInput& si, const std::vector<StabilityRow>& rows);

// ---------------------------------------------------------------- single point

struct PointReport {
  SIInput input;
  SystemParams params;
  ClassicalFixedPoint fixed_point;
  LinearizedModel linear;
  double r = 0.0;
  double omega_m_prime = 0.0;
  double G_prime = 0.0;
  double n_th_prime = 0.0;
  bool stable = false;
  double margin = 0.0;
  CriterionVerdict criterion = CriterionVerdict::NotApplicable;
  CriterionVerdict criterion_with_damping = CriterionVerdict::NotApplicable;
  double g0_threshold = 0.0;
  std::optional<double> variance;  ///< absent when unstable
  std::optional<double> squeezing_db;
  double analytic_cooling = 0.0;
  bool cooling_applicable = false;
  double analytic_strong = 0.0;
  bool strong_applicable = false;
  std::optional<double> eta_from_qubit;  ///< units of omega_m
  std::vector<std::string> warnings;
};

/// Throws on solver failure (the CLI maps this to exit code 2).
PointReport run_point(const SIInput& si, const RunOptions& opts = {},
                      const std::optional<QubitAncilla>& qubit = std::nullopt);
void write_report(std::ostream& out, const PointReport& report);

}  // namespace optosqueeze
