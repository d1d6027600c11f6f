#pragma once

#include "optosqueeze/steadystate.hpp"

namespace optosqueeze {

/// Quantities after the squeezing transformation S(r) = exp[r (b^2 - b^dag^2)/2]
/// that removes the parametric term from the mechanical quadratic form.
struct TransformedModel {
  double r = 0.0;
  double omega_m_prime = 1.0;
  double G_prime = 0.0;
  double n_th_prime = 0.0;
  double Delta_a = 1.0;
};

/// r = ln(1 + 4 Lambda / omega_m) / 4.
double squeezing_parameter(double Lambda, double omega_m);

/// omega_m sqrt(1 + 4 Lambda / omega_m).
double omega_prime(double Lambda, double omega_m);

/// n_th cosh(2r) + sinh^2(r).
double transformed_occupation(double n_th, double r);

TransformedModel transformed_model(const LinearizedModel& lin);

}  // namespace optosqueeze
