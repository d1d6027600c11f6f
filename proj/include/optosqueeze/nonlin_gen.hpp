#pragma once

#include <string>

namespace optosqueeze {

/// Qubit H_q = (Delta_q/2) sigma_x coupled to the resonator by lambda_q X sigma_z,
/// X = (b + b^dag)/sqrt 2. Both in angular units.
struct QubitAncilla {
  double Delta_q = 0.0;
  double lambda_q = 0.0;
};

/// How a quoted coupling value in Hz is read.
enum class CouplingReading {
  PerTwoPi,  ///< the quoted number is lambda_q / 2 pi
  Angular,   ///< the quoted number is lambda_q itself, in rad/s
};

/// Builds the ancilla from lab numbers: Delta_q/2pi in Hz and the coupling as quoted.
QubitAncilla qubit_from_lab(double delta_q_over_2pi_hz, double lambda_quoted, CouplingReading reading);

/// Duffing amplitude induced by the qubit.
///
/// The dispersive quartic term is 6 Delta_q (lambda_q/Delta_q)^4 X^4. With
/// X^4 = (b + b^dag)^4 / 4 and the mechanical convention (eta/2)(b + b^dag)^4
/// this gives eta = 3 Delta_q (lambda_q/Delta_q)^4, in the units of Delta_q.
/// Throws ValidityError when lambda_q/Delta_q >= 0.1.
double duffing_from_qubit(const QubitAncilla& q);

/// True when lambda_q/Delta_q is above the 0.05 warning level (still valid below 0.1).
bool dispersive_warning(const QubitAncilla& q);

struct BackactionCheck {
  double ratio = 0.0;   ///< lambda_q X_ss / Delta_q
  bool passes = false;  ///< ratio < 0.2
};

BackactionCheck backaction_check(const QubitAncilla& q, double X_ss);

std::string to_string(CouplingReading reading);

}  // namespace optosqueeze
