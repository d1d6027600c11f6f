#pragma once

#include <optional>
#include <string>
#include <vector>

namespace optosqueeze {

/// Physical constants used by the SI conversion.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

enum class Nonlinearity { Duffing, Cubic };

/// How the cavity detuning delta_a is chosen.
enum class DetuningMode {
  Fixed,    ///< use SystemParams::delta_a as given
  Optimal,  ///< solve for delta_a such that Delta_a = omega_m' self-consistently
};

/// Ancilla (readout) cavity. All rates in units of omega_m.
struct DetectionParams {
  double delta_s = 1.0;
  double g_s = 0.0;
  double kappa_s = 0.1;
  double drive_amplitude_s = 0.0;
};

/// Model constants in internal units (omega_m = 1 unless stated otherwise).
///
/// Every rate is an angular rate. The Hamiltonian in the drive frame is
///   H = delta_a a^dag a + Omega_d (a + a^dag) + omega_m b^dag b
///       + (eta/2)(b + b^dag)^4 - g0 a^dag a (b + b^dag)
/// with the quartic term replaced by eta (b + b^dag)^3 for the cubic variant.
struct SystemParams {
  double omega_m = 1.0;
  double delta_a = 1.0;
  double g0 = 1e-4;
  double eta = 1e-4;
  double kappa = 0.1;
  double gamma = 1e-6;
  double n_th = 0.0;
  double drive_amplitude = 0.0;
  Nonlinearity nonlinearity = Nonlinearity::Duffing;
  DetuningMode detuning = DetuningMode::Fixed;
  std::optional<DetectionParams> detection;
};

/// Throws DomainError on a hard invariant violation; returns soft warnings
/// (e.g. gamma not small compared with kappa).
std::vector<std::string> validate(const SystemParams& params);

/// Laboratory description of an operating point.
///
/// Frequencies are ordinary frequencies (Hz, i.e. omega / 2 pi). Rates are
/// given as ratios to omega_m.
struct SIInput {
  double omega_m_hz = 2e6;
  double omega_a_hz = 500e12;
  double omega_s_hz = 1000e12;
  double power_w = 0.0;
  double power_s_w = 0.0;
  double g0_ratio = 1e-4;
  double eta_ratio = 1e-4;
  double kappa_ratio = 0.1;
  double gamma_ratio = 1e-6;
  double n_th = 0.0;
  std::optional<double> delta_a_ratio;  ///< nullopt selects optimal detuning
  double delta_s_ratio = 1.0;
  Nonlinearity nonlinearity = Nonlinearity::Duffing;
  bool detection = false;
  // The ancilla shares g0 and kappa with the main cavity unless overridden.
  std::optional<double> g_s_ratio;
  std::optional<double> kappa_s_ratio;
};

/// Omega = sqrt(2 P kappa / (hbar omega_carrier)), SI angular rate in rad/s.
/// kappa and omega_carrier are angular rates in rad/s.
double drive_amplitude_from_power(double power_w, double kappa, double omega_carrier);

SystemParams to_internal(const SIInput& si);

std::string to_string(Nonlinearity kind);

}  // namespace optosqueeze
