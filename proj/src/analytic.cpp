#include "optosqueeze/analytic.hpp"

#include <cmath>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/transform.hpp"

namespace optosqueeze {

CoolingRates cooling_rates(double G_prime, double kappa, double omega_m_prime, double Delta_a) {
  if (!(kappa > 0.0)) {
    throw DomainError("cooling_rates: kappa must be positive");
  }
  const double g2k = kappa * G_prime * G_prime;
  const double dm = omega_m_prime - Delta_a;
  const double dp = omega_m_prime + Delta_a;
  CoolingRates r;
  r.Gamma_minus = g2k / (kappa * kappa / 4.0 + dm * dm);
  r.Gamma_plus = g2k / (kappa * kappa / 4.0 + dp * dp);
  r.Gamma = r.Gamma_minus - r.Gamma_plus;
  return r;
}

double effective_occupation(double gamma, double n_th_prime, const CoolingRates& rates) {
  const double total = gamma + rates.Gamma;
  if (!(total > 0.0)) {
    throw DomainError("effective_occupation: gamma + Gamma must be positive");
  }
  return (gamma * n_th_prime + rates.Gamma_plus) / total;
}

double variance_cooling_limit(double n_eff_prime, double r) {
  if (n_eff_prime < 0.0) {
    throw DomainError("variance_cooling_limit: n_eff' must be nonnegative");
  }
  return (n_eff_prime + 0.5) * std::exp(-2.0 * r);
}

double strong_coupling_rate(double G_prime, double kappa, double gamma) {
  const double g2 = 4.0 * G_prime * G_prime;
  return g2 * kappa / (kappa * kappa + kappa * gamma + g2);
}

double variance_strong_coupling(double gamma, double n_th, double G_prime, double kappa, double r) {
  if (!(kappa > 0.0) || !(gamma > 0.0)) {
    throw DomainError("variance_strong_coupling: kappa and gamma must be positive");
  }
  const double gsc = strong_coupling_rate(G_prime, kappa, gamma);
  return (2.0 * gamma * n_th + gamma + 2.0 * gsc * std::exp(-2.0 * r)) / (4.0 * (gamma + gsc));
}

double ultimate_variance(double gamma, double Gamma_sc) {
  const double total = gamma + 4.0 * Gamma_sc;
  if (!(total > 0.0)) {
    throw DomainError("ultimate_variance: gamma + 4 Gamma_sc must be positive");
  }
  return gamma / total;
}

bool cooling_limit_regime(double G_prime, double kappa, double omega_m_prime) {
  return G_prime <= kappa / 10.0 && kappa <= omega_m_prime / 10.0;
}

bool strong_coupling_regime(double G_prime, double kappa, double omega_m_prime) {
  return kappa <= G_prime / 5.0 && G_prime <= omega_m_prime / 10.0;
}

AnalyticEstimate analytic_estimate(const LinearizedModel& lin) {
  const TransformedModel t = transformed_model(lin);
  AnalyticEstimate e;
  e.rates = cooling_rates(t.G_prime, lin.kappa, t.omega_m_prime, lin.Delta_a);
  e.n_eff_prime = effective_occupation(lin.gamma, t.n_th_prime, e.rates);
  e.cooling_limit_variance = variance_cooling_limit(e.n_eff_prime, t.r);
  e.cooling_limit_applicable = cooling_limit_regime(t.G_prime, lin.kappa, t.omega_m_prime);
  e.Gamma_sc = strong_coupling_rate(t.G_prime, lin.kappa, lin.gamma);
  e.strong_coupling_variance = variance_strong_coupling(lin.gamma, lin.n_th, t.G_prime, lin.kappa, t.r);
  // The strong-coupling form assumes Delta_a = omega_m'.
  e.strong_coupling_applicable = strong_coupling_regime(t.G_prime, lin.kappa, t.omega_m_prime) &&
                                 std::abs(lin.Delta_a - t.omega_m_prime) <= 1e-6 * t.omega_m_prime;
  return e;
}

}  // namespace optosqueeze
