#include "optosqueeze/nonlin_gen.hpp"

#include <cmath>
#include <sstream>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/model.hpp"

namespace optosqueeze {

namespace {
constexpr double kDispersiveLimit = 0.1;
constexpr double kDispersiveWarning = 0.05;
constexpr double kBackactionLimit = 0.2;

double coupling_ratio(const QubitAncilla& q) {
  if (!(q.Delta_q > 0.0) || q.lambda_q < 0.0) {
    throw DomainError("qubit ancilla needs Delta_q > 0 and lambda_q >= 0");
  }
  return q.lambda_q / q.Delta_q;
}
}  // namespace

QubitAncilla qubit_from_lab(double delta_q_over_2pi_hz, double lambda_quoted, CouplingReading reading) {
  QubitAncilla q;
  q.Delta_q = constants::two_pi * delta_q_over_2pi_hz;
  q.lambda_q = reading == CouplingReading::PerTwoPi ? constants::two_pi * lambda_quoted : lambda_quoted;
  return q;
}

double duffing_from_qubit(const QubitAncilla& q) {
  const double ratio = coupling_ratio(q);
  if (ratio >= kDispersiveLimit) {
    std::ostringstream os;
    os << "lambda_q/Delta_q = " << ratio << " violates the dispersive condition (< 0.1)";
    throw ValidityError(os.str());
  }
  const double r2 = ratio * ratio;
  return 3.0 * q.Delta_q * r2 * r2;
}

bool dispersive_warning(const QubitAncilla& q) { return coupling_ratio(q) > kDispersiveWarning; }

BackactionCheck backaction_check(const QubitAncilla& q, double X_ss) {
  if (X_ss < 0.0) {
    throw DomainError("backaction_check: X_ss must be nonnegative");
  }
  BackactionCheck c;
  c.ratio = coupling_ratio(q) * X_ss;
  c.passes = c.ratio < kBackactionLimit;
  return c;
}

std::string to_string(CouplingReading reading) {
  return reading == CouplingReading::PerTwoPi ? "per-2pi" : "angular";
}

}  // namespace optosqueeze
