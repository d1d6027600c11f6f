#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "optosqueeze/analytic.hpp"
#include "optosqueeze/config.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/figures.hpp"
#include "optosqueeze/fock.hpp"
#include "optosqueeze/gaussian.hpp"
#include "optosqueeze/model.hpp"
#include "optosqueeze/nonlin_gen.hpp"
#include "optosqueeze/stability.hpp"
#include "optosqueeze/steadystate.hpp"
#include "optosqueeze/transform.hpp"

namespace py = pybind11;
using namespace optosqueeze;

namespace {

std::string csv(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steady-state mechanical squeezing in a driven optomechanical cavity";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<BranchAmbiguityError>(m, "BranchAmbiguityError", base.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<ValidityError>(m, "ValidityError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::enum_<Nonlinearity>(m, "Nonlinearity")
      .value("Duffing", Nonlinearity::Duffing)
      .value("Cubic", Nonlinearity::Cubic);
  py::enum_<DetuningMode>(m, "DetuningMode")
      .value("Fixed", DetuningMode::Fixed)
      .value("Optimal", DetuningMode::Optimal);
  py::enum_<BranchSelection>(m, "BranchSelection")
      .value("RequireUnique", BranchSelection::RequireUnique)
      .value("Continuation", BranchSelection::Continuation);
  py::enum_<CriterionVerdict>(m, "CriterionVerdict")
      .value("Stable", CriterionVerdict::Stable)
      .value("Unstable", CriterionVerdict::Unstable)
      .value("NotApplicable", CriterionVerdict::NotApplicable);
  py::enum_<Frame>(m, "Frame")
      .value("Shifted", Frame::Shifted)
      .value("ShiftedAndSqueezed", Frame::ShiftedAndSqueezed);
  py::enum_<CouplingReading>(m, "CouplingReading")
      .value("PerTwoPi", CouplingReading::PerTwoPi)
      .value("Angular", CouplingReading::Angular);

  py::class_<DetectionParams>(m, "DetectionParams")
      .def(py::init<>())
      .def_readwrite("delta_s", &DetectionParams::delta_s)
      .def_readwrite("g_s", &DetectionParams::g_s)
      .def_readwrite("kappa_s", &DetectionParams::kappa_s)
      .def_readwrite("drive_amplitude_s", &DetectionParams::drive_amplitude_s);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("omega_m", &SystemParams::omega_m)
      .def_readwrite("delta_a", &SystemParams::delta_a)
      .def_readwrite("g0", &SystemParams::g0)
      .def_readwrite("eta", &SystemParams::eta)
      .def_readwrite("kappa", &SystemParams::kappa)
      .def_readwrite("gamma", &SystemParams::gamma)
      .def_readwrite("n_th", &SystemParams::n_th)
      .def_readwrite("drive_amplitude", &SystemParams::drive_amplitude)
      .def_readwrite("nonlinearity", &SystemParams::nonlinearity)
      .def_readwrite("detuning", &SystemParams::detuning)
      .def_readwrite("detection", &SystemParams::detection);

  py::class_<SIInput>(m, "SIInput")
      .def(py::init<>())
      .def_readwrite("omega_m_hz", &SIInput::omega_m_hz)
      .def_readwrite("omega_a_hz", &SIInput::omega_a_hz)
      .def_readwrite("omega_s_hz", &SIInput::omega_s_hz)
      .def_readwrite("power_w", &SIInput::power_w)
      .def_readwrite("power_s_w", &SIInput::power_s_w)
      .def_readwrite("g0_ratio", &SIInput::g0_ratio)
      .def_readwrite("eta_ratio", &SIInput::eta_ratio)
      .def_readwrite("kappa_ratio", &SIInput::kappa_ratio)
      .def_readwrite("gamma_ratio", &SIInput::gamma_ratio)
      .def_readwrite("n_th", &SIInput::n_th)
      .def_readwrite("delta_a_ratio", &SIInput::delta_a_ratio)
      .def_readwrite("delta_s_ratio", &SIInput::delta_s_ratio)
      .def_readwrite("nonlinearity", &SIInput::nonlinearity)
      .def_readwrite("detection", &SIInput::detection)
      .def("set", [](SIInput& si, const std::string& key, const std::string& value) {
        apply_setting(si, key, value);
      });

  py::class_<ClassicalFixedPoint>(m, "ClassicalFixedPoint")
      .def_readonly("alpha", &ClassicalFixedPoint::alpha)
      .def_readonly("beta", &ClassicalFixedPoint::beta)
      .def_readonly("alpha_s", &ClassicalFixedPoint::alpha_s)
      .def_readonly("iterations", &ClassicalFixedPoint::iterations)
      .def_readonly("residual", &ClassicalFixedPoint::residual);

  py::class_<LinearizedModel>(m, "LinearizedModel")
      .def(py::init<>())
      .def_readwrite("Delta_a", &LinearizedModel::Delta_a)
      .def_readwrite("omega_m_tilde", &LinearizedModel::omega_m_tilde)
      .def_readwrite("Lambda", &LinearizedModel::Lambda)
      .def_readwrite("G", &LinearizedModel::G)
      .def_readwrite("Delta_s", &LinearizedModel::Delta_s)
      .def_readwrite("G_s", &LinearizedModel::G_s)
      .def_readwrite("kappa_s", &LinearizedModel::kappa_s)
      .def_readwrite("kappa", &LinearizedModel::kappa)
      .def_readwrite("gamma", &LinearizedModel::gamma)
      .def_readwrite("n_th", &LinearizedModel::n_th)
      .def_readwrite("omega_m", &LinearizedModel::omega_m);

  py::class_<OperatingPoint>(m, "OperatingPoint")
      .def_readonly("params", &OperatingPoint::params)
      .def_readonly("fixed_point", &OperatingPoint::fixed_point)
      .def_readonly("linear", &OperatingPoint::linear);

  py::class_<FixedPointOptions>(m, "FixedPointOptions")
      .def(py::init<>())
      .def_readwrite("tolerance", &FixedPointOptions::tolerance)
      .def_readwrite("max_iterations", &FixedPointOptions::max_iterations)
      .def_readwrite("branch", &FixedPointOptions::branch)
      .def_readwrite("continuation_steps", &FixedPointOptions::continuation_steps);

  py::class_<TransformedModel>(m, "TransformedModel")
      .def_readonly("r", &TransformedModel::r)
      .def_readonly("omega_m_prime", &TransformedModel::omega_m_prime)
      .def_readonly("G_prime", &TransformedModel::G_prime)
      .def_readonly("n_th_prime", &TransformedModel::n_th_prime)
      .def_readonly("Delta_a", &TransformedModel::Delta_a);

  py::class_<EigenVerdict>(m, "EigenVerdict")
      .def_readonly("stable", &EigenVerdict::stable)
      .def_readonly("margin", &EigenVerdict::margin);

  py::class_<QuadratureSystem>(m, "QuadratureSystem")
      .def_readonly("drift", &QuadratureSystem::drift)
      .def_readonly("diffusion", &QuadratureSystem::diffusion);

  py::class_<PhysicalityReport>(m, "PhysicalityReport")
      .def_readonly("asymmetry", &PhysicalityReport::asymmetry)
      .def_readonly("min_eigenvalue", &PhysicalityReport::min_eigenvalue)
      .def_readonly("min_symplectic", &PhysicalityReport::min_symplectic)
      .def_readonly("lyapunov_residual", &PhysicalityReport::lyapunov_residual)
      .def_readonly("backward_error", &PhysicalityReport::backward_error)
      .def_readonly("ok", &PhysicalityReport::ok);

  py::class_<AnalyticEstimate>(m, "AnalyticEstimate")
      .def_readonly("cooling_limit_variance", &AnalyticEstimate::cooling_limit_variance)
      .def_readonly("cooling_limit_applicable", &AnalyticEstimate::cooling_limit_applicable)
      .def_readonly("strong_coupling_variance", &AnalyticEstimate::strong_coupling_variance)
      .def_readonly("strong_coupling_applicable", &AnalyticEstimate::strong_coupling_applicable)
      .def_readonly("n_eff_prime", &AnalyticEstimate::n_eff_prime)
      .def_readonly("Gamma_sc", &AnalyticEstimate::Gamma_sc);

  py::class_<FockConfig>(m, "FockConfig")
      .def(py::init<>())
      .def_readwrite("n_cav", &FockConfig::n_cav)
      .def_readwrite("n_mech", &FockConfig::n_mech)
      .def_readwrite("n_anc", &FockConfig::n_anc)
      .def_readwrite("include_nl", &FockConfig::include_nl)
      .def_readwrite("frame", &FockConfig::frame)
      .def_readwrite("include_detection", &FockConfig::include_detection)
      .def_readwrite("rwa", &FockConfig::rwa)
      .def_readwrite("max_superoperator_dim", &FockConfig::max_superoperator_dim);

  py::class_<FockSteadyState>(m, "FockSteadyState")
      .def_readonly("variance_X", &FockSteadyState::variance_X)
      .def_readonly("mean_X", &FockSteadyState::mean_X)
      .def_readonly("trace_error", &FockSteadyState::trace_error)
      .def_readonly("hermiticity_error", &FockSteadyState::hermiticity_error)
      .def_readonly("min_eigenvalue", &FockSteadyState::min_eigenvalue)
      .def_readonly("top_population", &FockSteadyState::top_population)
      .def_readonly("cutoff_converged", &FockSteadyState::cutoff_converged);

  py::class_<QubitAncilla>(m, "QubitAncilla")
      .def(py::init<>())
      .def_readwrite("Delta_q", &QubitAncilla::Delta_q)
      .def_readwrite("lambda_q", &QubitAncilla::lambda_q);

  py::class_<BackactionCheck>(m, "BackactionCheck")
      .def_readonly("ratio", &BackactionCheck::ratio)
      .def_readonly("passes", &BackactionCheck::passes);

  // model
  m.def("drive_amplitude_from_power", &drive_amplitude_from_power, py::arg("power_w"), py::arg("kappa"),
        py::arg("omega_carrier"));
  m.def("to_internal", &to_internal);
  m.def("validate", &validate);
  m.def("parse_config_text", [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
  });
  m.def("load_config", &load_config);

  // steadystate
  m.def("real_cubic_roots", &real_cubic_roots);
  m.def("solve_classical_fixed_point", &solve_classical_fixed_point, py::arg("params"),
        py::arg("options") = FixedPointOptions{});
  m.def("linearize", &linearize);
  m.def("solve_operating_point", &solve_operating_point, py::arg("params"),
        py::arg("options") = FixedPointOptions{});
  m.def("solve_at_optimal_detuning", &solve_at_optimal_detuning, py::arg("params"),
        py::arg("options") = FixedPointOptions{}, py::arg("detuning_tolerance") = 1e-8);

  // transform
  m.def("squeezing_parameter", &squeezing_parameter, py::arg("Lambda"), py::arg("omega_m") = 1.0);
  m.def("omega_prime", &omega_prime, py::arg("Lambda"), py::arg("omega_m") = 1.0);
  m.def("transformed_occupation", &transformed_occupation);
  m.def("transformed_model", &transformed_model);

  // stability
  m.def("drift_matrix", [](const LinearizedModel& lin) { return Eigen::MatrixXcd(drift_matrix(lin).entries); });
  m.def("is_stable_eigen", [](const LinearizedModel& lin) { return is_stable_eigen(drift_matrix(lin)); });
  m.def("is_stable_criterion", &is_stable_criterion);
  m.def("is_stable_criterion_with_damping", &is_stable_criterion_with_damping);
  m.def("optimal_point_threshold", &optimal_point_threshold, py::arg("omega_m"), py::arg("eta"));

  // gaussian
  m.def("build_quadrature_system", &build_quadrature_system);
  m.def("solve_lyapunov", [](const QuadratureSystem& sys) { return Eigen::MatrixXd(solve_lyapunov(sys).V); });
  m.def("steady_state_variance", &steady_state_variance);
  m.def("squeezing_db", &squeezing_db);
  m.def("detection_cooling_rate", &detection_cooling_rate);
  m.def("check_physicality", [](const QuadratureSystem& sys, const Eigen::MatrixXd& V) {
    return check_physicality(sys, CovarianceState{V});
  });

  // analytic
  m.def("analytic_estimate", &analytic_estimate);
  m.def("variance_strong_coupling", &variance_strong_coupling, py::arg("gamma"), py::arg("n_th"),
        py::arg("G_prime"), py::arg("kappa"), py::arg("r"));
  m.def("ultimate_variance", &ultimate_variance, py::arg("gamma"), py::arg("Gamma_sc"));

  // fock
  m.def("fock_steady_state",
        [](const OperatingPoint& op, const FockConfig& cfg) {
          return steady_state(build_liouvillian(op.linear, op.params, op.fixed_point, cfg));
        },
        py::arg("operating_point"), py::arg("config") = FockConfig{});

  // nonlin_gen
  m.def("qubit_from_lab", &qubit_from_lab, py::arg("delta_q_over_2pi_hz"), py::arg("lambda_quoted"),
        py::arg("reading") = CouplingReading::PerTwoPi);
  m.def("duffing_from_qubit", &duffing_from_qubit);
  m.def("backaction_check", &backaction_check);

  // figures, returned as CSV text
  m.def("fig2_csv",
        [](const SIInput& si, double p_start, double p_stop, int points, int jobs) {
          const Range r{p_start, p_stop, points, Scale::Log};
          RunOptions o;
          o.jobs = jobs;
          return csv(fig2_table(si, run_fig2(si, r, o)));
        },
        py::arg("si"), py::arg("p_start") = 1e-6, py::arg("p_stop") = 1e-3, py::arg("points") = 31,
        py::arg("jobs") = 1);
  m.def("fig3_csv",
        [](const SIInput& si, int delta_points, int lambda_points, int jobs) {
          Fig3Spec spec;
          spec.delta_a.points = delta_points;
          spec.lambda.points = lambda_points;
          RunOptions o;
          o.jobs = jobs;
          return csv(fig3_table(si, run_fig3(si, spec, o)));
        },
        py::arg("si"), py::arg("delta_points") = 100, py::arg("lambda_points") = 100, py::arg("jobs") = 1);
  m.def("point_report", [](const SIInput& si) {
    std::ostringstream os;
    write_report(os, run_point(si));
    return os.str();
  });
}
