#pragma once

#include "optosqueeze/steadystate.hpp"

namespace optosqueeze {

/// Sideband rates of the transformed mechanical mode after adiabatic
/// elimination of the cavity.
struct CoolingRates {
  double Gamma_minus = 0.0;
  double Gamma_plus = 0.0;
  double Gamma = 0.0;  ///< net cooling rate Gamma_minus - Gamma_plus
};

/// Gamma_-+ = kappa G'^2 / (kappa^2/4 + (omega_m' -+ Delta_a)^2).
CoolingRates cooling_rates(double G_prime, double kappa, double omega_m_prime, double Delta_a);

/// (gamma n'_th + Gamma_plus) / (gamma + Gamma).
double effective_occupation(double gamma, double n_th_prime, const CoolingRates& rates);

/// (n'_eff + 1/2) e^{-2r}.
double variance_cooling_limit(double n_eff_prime, double r);

/// 4 G'^2 kappa / (kappa^2 + kappa gamma + 4 G'^2).
double strong_coupling_rate(double G_prime, double kappa, double gamma);

/// (2 gamma n_th + gamma + 2 Gamma_sc e^{-2r}) / (4 (gamma + Gamma_sc)) at the optimal detuning.
double variance_strong_coupling(double gamma, double n_th, double G_prime, double kappa, double r);

/// gamma / (gamma + 4 Gamma_sc), the zero-temperature, large-r limit as printed.
double ultimate_variance(double gamma, double Gamma_sc);

/// G' <= kappa/10 and kappa <= omega_m'/10.
bool cooling_limit_regime(double G_prime, double kappa, double omega_m_prime);

/// kappa <= G'/5 and G' <= omega_m'/10.
bool strong_coupling_regime(double G_prime, double kappa, double omega_m_prime);

/// Both closed-form predictions for a linearized model, each with its
/// regime flag.
struct AnalyticEstimate {
  double cooling_limit_variance = 0.0;
  bool cooling_limit_applicable = false;
  double strong_coupling_variance = 0.0;
  bool strong_coupling_applicable = false;
  CoolingRates rates;
  double n_eff_prime = 0.0;
  double Gamma_sc = 0.0;
};

AnalyticEstimate analytic_estimate(const LinearizedModel& lin);

}  // namespace optosqueeze
