#include "optosqueeze/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <unsupported/Eigen/Polynomials>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/transform.hpp"

namespace optosqueeze {

namespace {

using cd = std::complex<double>;
using Poly = std::vector<double>;  // coefficients, lowest degree first

double eval_poly(const Poly& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

double poly_scale(const Poly& c, double x) {
  double s = 0.0;
  double xp = 1.0;
  for (double ci : c) {
    s = std::max({s, std::abs(ci), std::abs(ci * xp)});
    xp *= std::abs(x);
  }
  return s;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

Poly poly_add(Poly a, const Poly& b, double scale = 1.0) {
  if (a.size() < b.size()) {
    a.resize(b.size(), 0.0);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    a[i] += scale * b[i];
  }
  return a;
}

// Newton polish of a polynomial root; keeps the iterate only while |p| shrinks.
double polish_poly_root(const Poly& c, double x) {
  Poly d;
  for (std::size_t i = 1; i < c.size(); ++i) {
    d.push_back(static_cast<double>(i) * c[i]);
  }
  double fx = eval_poly(c, x);
  for (int it = 0; it < 8 && fx != 0.0; ++it) {
    const double dfx = eval_poly(d, x);
    if (dfx == 0.0) {
      break;
    }
    const double next = x - fx / dfx;
    const double fnext = eval_poly(c, next);
    if (!(std::abs(fnext) < std::abs(fx))) {
      break;
    }
    x = next;
    fx = fnext;
  }
  return x;
}

std::vector<double> finalize_roots(const Poly& c, std::vector<double> roots) {
  for (double& x : roots) {
    x = polish_poly_root(c, x);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double x : roots) {
    const double tol = 1e-10 * poly_scale(c, x);
    if (std::abs(eval_poly(c, x)) > tol) {
      continue;
    }
    if (!out.empty() && std::abs(out.back() - x) <= 1e-9 * std::max(1.0, std::abs(x))) {
      continue;
    }
    out.push_back(x);
  }
  return out;
}

// The amplitude equations reduced to one scalar equation in beta:
//   F(beta) = M(beta) - g0 |alpha(beta)|^2 - g_s |alpha_s(beta)|^2.
class AmplitudeProblem {
 public:
  AmplitudeProblem(const SystemParams& p, double drive_scale = 1.0) : p_(p), scale_(drive_scale) {}

  double drive() const { return scale_ * p_.drive_amplitude; }
  double drive_s() const { return p_.detection ? scale_ * p_.detection->drive_amplitude_s : 0.0; }

  cd alpha(double beta) const {
    return cavity_amplitude(p_.delta_a, p_.g0, p_.kappa, drive(), beta);
  }

  std::optional<cd> alpha_s(double beta) const {
    if (!p_.detection) {
      return std::nullopt;
    }
    const auto& d = *p_.detection;
    return cavity_amplitude(d.delta_s, d.g_s, d.kappa_s, drive_s(), beta);
  }

  double mech(double beta) const {
    if (p_.nonlinearity == Nonlinearity::Duffing) {
      return 16.0 * p_.eta * beta * beta * beta + (12.0 * p_.eta + p_.omega_m) * beta;
    }
    return 12.0 * p_.eta * beta * beta + p_.omega_m * beta + 3.0 * p_.eta;
  }

  double mech_derivative(double beta) const {
    if (p_.nonlinearity == Nonlinearity::Duffing) {
      return 48.0 * p_.eta * beta * beta + 12.0 * p_.eta + p_.omega_m;
    }
    return 24.0 * p_.eta * beta + p_.omega_m;
  }

  double source(double beta) const {
    double s = p_.g0 * std::norm(alpha(beta));
    if (auto as = alpha_s(beta)) {
      s += p_.detection->g_s * std::norm(*as);
    }
    return s;
  }

  double source_derivative(double beta) const {
    double ds = lorentz_source_derivative(p_.delta_a, p_.g0, p_.kappa, drive(), beta);
    if (p_.detection) {
      const auto& d = *p_.detection;
      ds += lorentz_source_derivative(d.delta_s, d.g_s, d.kappa_s, drive_s(), beta);
    }
    return ds;
  }

  double residual(double beta) const { return mech(beta) - source(beta); }
  double residual_derivative(double beta) const {
    return mech_derivative(beta) - source_derivative(beta);
  }

  double residual_scale(double beta) const {
    double s = std::max({1.0, std::abs(source(beta))});
    if (p_.nonlinearity == Nonlinearity::Duffing) {
      s = std::max({s, std::abs(16.0 * p_.eta * beta * beta * beta),
                    std::abs((12.0 * p_.eta + p_.omega_m) * beta)});
    } else {
      s = std::max({s, std::abs(12.0 * p_.eta * beta * beta), std::abs(p_.omega_m * beta)});
    }
    return s;
  }

  double scaled_residual(double beta) const {
    return std::abs(residual(beta)) / residual_scale(beta);
  }

  // Stable mechanical root of M(beta) = source.
  double mech_root(double source_value) const {
    std::vector<double> roots;
    if (p_.nonlinearity == Nonlinearity::Duffing) {
      roots = real_cubic_roots(16.0 * p_.eta, 0.0, 12.0 * p_.eta + p_.omega_m, -source_value);
    } else {
      roots = real_cubic_roots(0.0, 12.0 * p_.eta, p_.omega_m, 3.0 * p_.eta - source_value);
    }
    if (roots.empty()) {
      throw ConvergenceError("mechanical amplitude equation has no real root", source_value);
    }
    // Duffing: unique. Cubic: the larger root is the one with positive stiffness.
    return roots.back();
  }

  // M(beta) L1 L2 - g0 W^2 L2 - g_s W_s^2 L1 with L the Lorentzian denominators.
  Poly numerator_polynomial() const {
    Poly mech_poly;
    if (p_.nonlinearity == Nonlinearity::Duffing) {
      mech_poly = {0.0, 12.0 * p_.eta + p_.omega_m, 0.0, 16.0 * p_.eta};
    } else {
      mech_poly = {3.0 * p_.eta, p_.omega_m, 12.0 * p_.eta};
    }
    const Poly l1 = lorentz_denominator(p_.delta_a, p_.g0, p_.kappa);
    if (!p_.detection) {
      return poly_add(poly_mul(mech_poly, l1), Poly{-p_.g0 * drive() * drive()});
    }
    const auto& d = *p_.detection;
    const Poly l2 = lorentz_denominator(d.delta_s, d.g_s, d.kappa_s);
    Poly out = poly_mul(poly_mul(mech_poly, l1), l2);
    out = poly_add(out, l2, -p_.g0 * drive() * drive());
    out = poly_add(out, l1, -d.g_s * drive_s() * drive_s());
    return out;
  }

  bool admissible(double beta) const {
    return residual_derivative(beta) > 0.0 && mech_derivative(beta) > 0.0;
  }

  double newton(double beta, int max_iter, double tol, int* iterations = nullptr) const {
    for (int it = 0; it < max_iter; ++it) {
      if (scaled_residual(beta) <= tol) {
        if (iterations) *iterations += it;
        return beta;
      }
      const double d = residual_derivative(beta);
      if (d == 0.0 || !std::isfinite(d)) {
        break;
      }
      beta -= residual(beta) / d;
    }
    if (iterations) *iterations += max_iter;
    return beta;
  }

 private:
  static cd cavity_amplitude(double delta, double g, double kappa, double drive, double beta) {
    const cd denom(-kappa / 2.0, -(delta - 2.0 * g * beta));
    return cd(0.0, drive) / denom;
  }

  static Poly lorentz_denominator(double delta, double g, double kappa) {
    // (delta - 2 g beta)^2 + kappa^2/4
    return {delta * delta + kappa * kappa / 4.0, -4.0 * g * delta, 4.0 * g * g};
  }

  static double lorentz_source_derivative(double delta, double g, double kappa, double drive,
                                          double beta) {
    const double det = delta - 2.0 * g * beta;
    const double l = det * det + kappa * kappa / 4.0;
    // d/dbeta [g W^2 / l] = -g W^2 l' / l^2, l' = -4 g det
    return g * drive * drive * 4.0 * g * det / (l * l);
  }

  const SystemParams& p_;
  double scale_;
};

std::vector<double> enumerate_branches(const AmplitudeProblem& prob, double beta_hint) {
  Poly c = prob.numerator_polynomial();
  while (!c.empty() && c.back() == 0.0) {
    c.pop_back();
  }
  std::vector<double> candidates;
  if (c.size() >= 2) {
    // Rescale beta = s u to balance the companion matrix.
    const double s = std::max(1.0, std::abs(beta_hint));
    Poly cu(c.size());
    double sp = 1.0;
    double cmax = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      cu[k] = c[k] * sp;
      sp *= s;
      cmax = std::max(cmax, std::abs(cu[k]));
    }
    for (double& v : cu) {
      v /= cmax;
    }
    // Drop leading coefficients that are negligible at the working scale.
    while (cu.size() > 2 && std::abs(cu.back()) < 1e-300) {
      cu.pop_back();
    }
    Eigen::VectorXd coeffs = Eigen::Map<const Eigen::VectorXd>(cu.data(), static_cast<Eigen::Index>(cu.size()));
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(coeffs);
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
      const cd root = solver.roots()[i];
      if (std::abs(root.imag()) <= 1e-6 * std::max(1.0, std::abs(root.real()))) {
        candidates.push_back(root.real() * s);
      }
    }
  }
  candidates.push_back(beta_hint);

  std::vector<double> out;
  for (double b : candidates) {
    const double polished = prob.newton(b, 50, 1e-13);
    if (!std::isfinite(polished) || prob.scaled_residual(polished) > 1e-9) {
      continue;
    }
    if (!prob.admissible(polished)) {
      continue;
    }
    out.push_back(polished);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double b : out) {
    if (unique.empty() || std::abs(unique.back() - b) > 1e-7 * std::max(1.0, std::abs(b))) {
      unique.push_back(b);
    }
  }
  return unique;
}

// Alternating closed-form alpha update and stable-root beta update.
std::optional<double> alternate(const AmplitudeProblem& prob, double beta0,
                                const FixedPointOptions& opt, int& iterations) {
  double beta = beta0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double next = prob.mech_root(prob.source(beta));
    iterations = it;
    if (!std::isfinite(next)) {
      return std::nullopt;
    }
    const double step = std::abs(next - beta);
    beta = next;
    if (step <= 1e-15 * std::max(1.0, std::abs(beta)) || prob.scaled_residual(beta) <= opt.tolerance) {
      return beta;
    }
  }
  return std::nullopt;
}

double zero_drive_beta(const AmplitudeProblem& prob) { return prob.mech_root(0.0); }

ClassicalFixedPoint assemble(const SystemParams& p, const AmplitudeProblem& prob, double beta,
                             int iterations) {
  ClassicalFixedPoint fp;
  fp.beta = beta;
  fp.alpha = prob.alpha(beta);
  fp.alpha_s = prob.alpha_s(beta);
  fp.iterations = iterations;

  const auto cavity_residual = [](double delta, double g, double kappa, double drive, double b,
                                  cd a) {
    const cd lhs = cd(-kappa / 2.0, -(delta - 2.0 * g * b)) * a - cd(0.0, drive);
    return std::abs(lhs) / std::max(1.0, std::abs(drive));
  };
  double res = prob.scaled_residual(beta);
  res = std::max(res, cavity_residual(p.delta_a, p.g0, p.kappa, prob.drive(), beta, fp.alpha));
  if (p.detection && fp.alpha_s) {
    const auto& d = *p.detection;
    res = std::max(res, cavity_residual(d.delta_s, d.g_s, d.kappa_s, prob.drive_s(), beta, *fp.alpha_s));
  }
  fp.residual = res;
  return fp;
}

ClassicalFixedPoint solve_by_continuation(const SystemParams& p, const FixedPointOptions& opt) {
  const int steps = std::max(1, opt.continuation_steps);
  double beta = zero_drive_beta(AmplitudeProblem(p, 0.0));
  int iterations = 0;
  for (int k = 1; k <= steps; ++k) {
    const AmplitudeProblem prob(p, static_cast<double>(k) / steps);
    const double guess = prob.newton(beta, 50, opt.tolerance, &iterations);
    if (prob.scaled_residual(guess) <= 1e-9 && prob.admissible(guess) &&
        std::abs(guess - beta) <= 0.5 * std::max(1.0, std::abs(beta))) {
      beta = guess;
      continue;
    }
    // Branch ended (fold) or Newton wandered: take the nearest surviving branch.
    const auto branches = enumerate_branches(prob, beta);
    if (branches.empty()) {
      throw ConvergenceError("continuation lost the classical branch", prob.scaled_residual(guess));
    }
    beta = *std::min_element(branches.begin(), branches.end(), [&](double a, double b) {
      return std::abs(a - beta) < std::abs(b - beta);
    });
  }
  const AmplitudeProblem prob(p);
  beta = prob.newton(beta, 20, opt.tolerance, &iterations);
  return assemble(p, prob, beta, iterations);
}

}  // namespace

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0 && c2 == 0.0 && c1 == 0.0) {
    throw DomainError("real_cubic_roots: polynomial has no variable terms");
  }
  const Poly c{c0, c1, c2, c3};
  std::vector<double> roots;
  if (c3 == 0.0 && c2 == 0.0) {
    roots.push_back(-c0 / c1);
  } else if (c3 == 0.0) {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
      if (q != 0.0) {
        roots.push_back(q / c2);
        roots.push_back(c0 / q);
      } else {
        roots.push_back(0.0);
      }
    }
  } else {
    // x^3 + a x^2 + b x + cc = 0
    const double a = c2 / c3;
    const double b = c1 / c3;
    const double cc = c0 / c3;
    const double q = (a * a - 3.0 * b) / 9.0;
    const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * cc) / 54.0;
    const double q3 = q * q * q;
    if (r * r < q3) {
      const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
      const double m = -2.0 * std::sqrt(q);
      roots.push_back(m * std::cos(theta / 3.0) - a / 3.0);
      roots.push_back(m * std::cos((theta + constants::two_pi) / 3.0) - a / 3.0);
      roots.push_back(m * std::cos((theta - constants::two_pi) / 3.0) - a / 3.0);
    } else {
      const double big = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
      const double small = big != 0.0 ? q / big : 0.0;
      roots.push_back(big + small - a / 3.0);
    }
  }
  return finalize_roots(c, roots);
}

std::vector<double> admissible_branches(const SystemParams& params) {
  validate(params);
  const AmplitudeProblem prob(params);
  int iterations = 0;
  const double hint = alternate(prob, zero_drive_beta(prob), FixedPointOptions{}, iterations)
                          .value_or(zero_drive_beta(prob));
  return enumerate_branches(prob, hint);
}

ClassicalFixedPoint solve_classical_fixed_point(const SystemParams& params,
                                                const FixedPointOptions& options) {
  validate(params);
  if (options.branch == BranchSelection::Continuation) {
    return solve_by_continuation(params, options);
  }

  const AmplitudeProblem prob(params);
  int iterations = 0;
  const double start = zero_drive_beta(prob);
  const auto alternated = alternate(prob, start, options, iterations);

  const auto branches = enumerate_branches(prob, alternated.value_or(start));
  if (branches.size() > 1) {
    std::ostringstream os;
    os << "classical amplitude equations have " << branches.size()
       << " stable branches (beta =";
    for (double b : branches) os << ' ' << b;
    os << "); select continuation to follow the low-drive branch";
    throw BranchAmbiguityError(os.str(), branches);
  }

  double beta;
  if (alternated && (branches.empty() ||
                     std::abs(*alternated - branches.front()) <=
                         1e-6 * std::max(1.0, std::abs(branches.front())))) {
    beta = *alternated;
  } else if (!branches.empty()) {
    beta = branches.front();  // Newton fallback landed here
  } else {
    const double polished = prob.newton(alternated.value_or(start), options.max_iterations,
                                        options.tolerance, &iterations);
    if (prob.scaled_residual(polished) > options.tolerance) {
      throw ConvergenceError("classical fixed point did not converge",
                             prob.scaled_residual(polished));
    }
    beta = polished;
  }
  beta = prob.newton(beta, 20, options.tolerance, &iterations);
  auto fp = assemble(params, prob, beta, iterations);
  if (fp.residual > std::max(options.tolerance, 1e-12)) {
    // One more polish; rounding may leave the closed-form alpha a hair off.
    beta = prob.newton(beta, 5, 0.0, &iterations);
    fp = assemble(params, prob, beta, iterations);
  }
  if (fp.residual > 10.0 * std::max(options.tolerance, 1e-12)) {
    throw ConvergenceError("classical fixed point residual above tolerance", fp.residual);
  }
  return fp;
}

LinearizedModel linearize(const SystemParams& params, const ClassicalFixedPoint& fp) {
  LinearizedModel lin;
  lin.omega_m = params.omega_m;
  lin.kappa = params.kappa;
  lin.gamma = params.gamma;
  lin.n_th = params.n_th;
  lin.Delta_a = params.delta_a - 2.0 * params.g0 * fp.beta;
  if (params.nonlinearity == Nonlinearity::Duffing) {
    lin.Lambda = 3.0 * params.eta * (4.0 * fp.beta * fp.beta + 1.0);
  } else {
    lin.Lambda = 6.0 * params.eta * fp.beta;
  }
  lin.omega_m_tilde = params.omega_m + 2.0 * lin.Lambda;
  lin.G = params.g0 * std::abs(fp.alpha);
  if (params.detection) {
    const auto& d = *params.detection;
    lin.Delta_s = d.delta_s - 2.0 * d.g_s * fp.beta;
    lin.G_s = fp.alpha_s ? d.g_s * std::abs(*fp.alpha_s) : 0.0;
    lin.kappa_s = d.kappa_s;
  }
  return lin;
}

OperatingPoint solve_at_optimal_detuning(const SystemParams& params,
                                         const FixedPointOptions& options,
                                         double detuning_tolerance) {
  validate(params);
  // At the optimal point Delta_a = omega'(beta) is a function of beta alone,
  // so |alpha|^2 = W^2 / (omega'^2 + kappa^2/4) and the amplitude equations
  // collapse to one equation H(beta) = 0. Without the ancilla H is strictly
  // increasing wherever M(beta) >= 0, so the root is unique; with it the
  // smallest root is taken.
  const double w = params.omega_m;
  const auto lambda_of = [&](double beta) {
    return params.nonlinearity == Nonlinearity::Duffing ? 3.0 * params.eta * (4.0 * beta * beta + 1.0)
                                                        : 6.0 * params.eta * beta;
  };
  const auto omega_p = [&](double beta) { return omega_prime(lambda_of(beta), w); };
  const AmplitudeProblem shape(params);
  const auto ancilla_source = [&](double beta) {
    if (!params.detection) {
      return 0.0;
    }
    const auto& d = *params.detection;
    const double det = d.delta_s - 2.0 * d.g_s * beta;
    const double W = d.drive_amplitude_s;
    return d.g_s * W * W / (det * det + d.kappa_s * d.kappa_s / 4.0);
  };
  const auto H = [&](double beta) {
    const double wp = omega_p(beta);
    const double W = params.drive_amplitude;
    return shape.mech(beta) - params.g0 * W * W / (wp * wp + params.kappa * params.kappa / 4.0) -
           ancilla_source(beta);
  };

  // Lower end: where M(beta) = 0 on the positive-stiffness side.
  const double lo0 = shape.mech_root(0.0);
  double lo = lo0;
  double h_lo = H(lo);
  if (h_lo > 0.0) {
    throw ConvergenceError("optimal detuning: residual positive at zero source", h_lo);
  }
  double hi = std::max(1.0, 2.0 * std::abs(lo));
  double h_hi = H(hi);
  for (int k = 0; k < 200 && !(h_hi > 0.0); ++k) {
    lo = hi;
    h_lo = h_hi;
    hi *= 2.0;
    h_hi = H(hi);
  }
  if (!(h_hi > 0.0)) {
    throw ConvergenceError("optimal detuning: could not bracket beta", h_hi);
  }
  if (params.detection) {
    // The ancilla Lorentzian can fold H; bracket its first sign change.
    const int samples = 4000;
    double a = lo0;
    double ha = H(a);
    for (int i = 1; i <= samples; ++i) {
      const double b = lo0 + (hi - lo0) * i / samples;
      const double hb = H(b);
      if (ha <= 0.0 && hb > 0.0) {
        lo = a;
        h_lo = ha;
        hi = b;
        h_hi = hb;
        break;
      }
      a = b;
      ha = hb;
    }
  }

  double beta = lo;
  if (h_lo < 0.0) {
    const auto tol = [](double x, double y) {
      return std::abs(y - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    };
    std::uintmax_t max_iter = 300;
    const auto bracket = boost::math::tools::toms748_solve(H, lo, hi, h_lo, h_hi, tol, max_iter);
    beta = std::abs(H(bracket.first)) <= std::abs(H(bracket.second)) ? bracket.first : bracket.second;
  }

  SystemParams work = params;
  work.detuning = DetuningMode::Fixed;
  work.delta_a = omega_p(beta) + 2.0 * params.g0 * beta;
  const AmplitudeProblem prob(work);
  int iterations = 0;
  beta = prob.newton(beta, 5, options.tolerance, &iterations);

  OperatingPoint op;
  op.params = work;
  op.fixed_point = assemble(work, prob, beta, iterations);
  op.linear = linearize(work, op.fixed_point);
  const double res = std::abs(op.linear.Delta_a - omega_prime(op.linear.Lambda, op.linear.omega_m));
  if (!(res < detuning_tolerance * std::max(1.0, work.delta_a))) {
    throw ConvergenceError("optimal detuning did not converge", res);
  }
  return op;
}

OperatingPoint solve_operating_point(const SystemParams& params, const FixedPointOptions& options) {
  if (params.detuning == DetuningMode::Optimal) {
    return solve_at_optimal_detuning(params, options);
  }
  OperatingPoint op;
  op.params = params;
  op.fixed_point = solve_classical_fixed_point(params, options);
  op.linear = linearize(params, op.fixed_point);
  return op;
}

}  // namespace optosqueeze
