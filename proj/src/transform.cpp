#include "optosqueeze/transform.hpp"

#include <cmath>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

// 1 + 4 Lambda / omega_m; every transformed quantity derives from this one number.
double stiffening(double Lambda, double omega_m) {
  if (!(omega_m > 0.0)) {
    throw DomainError("omega_m must be positive");
  }
  const double s = 1.0 + 4.0 * Lambda / omega_m;
  if (!(s > 0.0)) {
    throw DomainError("1 + 4 Lambda / omega_m must be positive");
  }
  return s;
}

}  // namespace

double squeezing_parameter(double Lambda, double omega_m) {
  return 0.25 * std::log(stiffening(Lambda, omega_m));
}

double omega_prime(double Lambda, double omega_m) {
  return omega_m * std::sqrt(stiffening(Lambda, omega_m));
}

double transformed_occupation(double n_th, double r) {
  if (n_th < 0.0) {
    throw DomainError("n_th must be nonnegative");
  }
  const double sh = std::sinh(r);
  return n_th * std::cosh(2.0 * r) + sh * sh;
}

TransformedModel transformed_model(const LinearizedModel& lin) {
  const double s = stiffening(lin.Lambda, lin.omega_m);
  TransformedModel t;
  t.r = 0.25 * std::log(s);
  t.omega_m_prime = lin.omega_m * std::sqrt(s);
  t.G_prime = lin.G / std::sqrt(std::sqrt(s));
  t.n_th_prime = transformed_occupation(lin.n_th, t.r);
  t.Delta_a = lin.Delta_a;
  return t;
}

}  // namespace optosqueeze
