#include "optosqueeze/model.hpp"

#include <cmath>
#include <sstream>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

void require(bool ok, const char* what) {
  if (!ok) {
    throw DomainError(what);
  }
}

}  // namespace

std::vector<std::string> validate(const SystemParams& p) {
  require(p.omega_m > 0.0, "omega_m must be positive");
  require(p.kappa > 0.0, "kappa must be positive");
  require(p.gamma > 0.0, "gamma must be positive");
  require(p.eta >= 0.0, "eta must be nonnegative");
  require(p.n_th >= 0.0, "n_th must be nonnegative");
  require(std::isfinite(p.delta_a) && std::isfinite(p.g0) && std::isfinite(p.drive_amplitude),
          "parameters must be finite");
  if (p.detection) {
    require(p.detection->kappa_s > 0.0, "kappa_s must be positive");
  }

  std::vector<std::string> warnings;
  if (p.gamma > p.kappa / 10.0) {
    std::ostringstream os;
    os << "gamma/kappa = " << p.gamma / p.kappa
       << " is not small; analytic limits assume gamma << kappa";
    warnings.push_back(os.str());
  }
  return warnings;
}

double drive_amplitude_from_power(double power_w, double kappa, double omega_carrier) {
  if (power_w < 0.0 || kappa < 0.0 || omega_carrier < 0.0) {
    throw DomainError("drive_amplitude_from_power: inputs must be nonnegative");
  }
  if (power_w == 0.0 || kappa == 0.0) {
    return 0.0;
  }
  if (omega_carrier == 0.0) {
    throw DomainError("drive_amplitude_from_power: carrier frequency must be positive");
  }
  return std::sqrt(2.0 * power_w * kappa / (constants::hbar * omega_carrier));
}

SystemParams to_internal(const SIInput& si) {
  if (si.omega_m_hz == 0.0) {
    throw DomainError("to_internal: omega_m must be nonzero");
  }
  if (si.omega_m_hz < 0.0 || si.omega_a_hz < 0.0 || si.omega_s_hz < 0.0 || si.power_w < 0.0 ||
      si.power_s_w < 0.0) {
    throw DomainError("to_internal: frequencies and powers must be nonnegative");
  }

  const double omega_m = constants::two_pi * si.omega_m_hz;
  const double omega_a = constants::two_pi * si.omega_a_hz;
  const double omega_s = constants::two_pi * si.omega_s_hz;

  SystemParams p;
  p.omega_m = 1.0;
  p.g0 = si.g0_ratio;
  p.eta = si.eta_ratio;
  p.kappa = si.kappa_ratio;
  p.gamma = si.gamma_ratio;
  p.n_th = si.n_th;
  p.nonlinearity = si.nonlinearity;
  if (si.delta_a_ratio) {
    p.delta_a = *si.delta_a_ratio;
    p.detuning = DetuningMode::Fixed;
  } else {
    p.delta_a = 1.0;
    p.detuning = DetuningMode::Optimal;
  }
  p.drive_amplitude =
      drive_amplitude_from_power(si.power_w, si.kappa_ratio * omega_m, omega_a) / omega_m;

  if (si.detection) {
    DetectionParams d;
    d.delta_s = si.delta_s_ratio;
    d.g_s = si.g_s_ratio.value_or(si.g0_ratio);
    d.kappa_s = si.kappa_s_ratio.value_or(si.kappa_ratio);
    d.drive_amplitude_s =
        drive_amplitude_from_power(si.power_s_w, d.kappa_s * omega_m, omega_s) / omega_m;
    p.detection = d;
  }
  return p;
}

std::string to_string(Nonlinearity kind) {
  return kind == Nonlinearity::Duffing ? "duffing" : "cubic";
}

}  // namespace optosqueeze
