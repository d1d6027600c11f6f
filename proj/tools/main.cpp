#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optosqueeze/config.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/figures.hpp"
#include "optosqueeze/nonlin_gen.hpp"

using namespace optosqueeze;

namespace {

enum Exit { kOk = 0, kBadConfig = 1, kSolverFailure = 2, kCapacity = 3 };

// Options shared by every model-driven subcommand.
struct Common {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  int jobs = 1;
  std::string out_path;
  std::string branch = "continuation";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config_path, "config file (key = value lines)");
  for (const auto& key : config_keys()) {
    sub->add_option_function<std::string>(
        "--" + key, [&c, key](const std::string& v) { c.overrides[key] = v; },
        "override config key " + key);
  }
  sub->add_option("-j,--jobs", c.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  sub->add_option("-o,--out", c.out_path, "write CSV here instead of stdout");
  sub->add_option("--branch", c.branch, "classical branch selection")
      ->check(CLI::IsMember({"unique", "continuation"}));
}

SIInput resolve(const Common& c) {
  SIInput si = c.config_path.empty() ? SIInput{} : load_config(c.config_path);
  for (const auto& [key, value] : c.overrides) {
    apply_setting(si, key, value);
  }
  return si;
}

RunOptions run_options(const Common& c) {
  RunOptions o;
  o.jobs = c.jobs;
  o.branch = c.branch == "unique" ? BranchSelection::RequireUnique : BranchSelection::Continuation;
  return o;
}

Scale parse_scale(const std::string& s) { return s == "log" ? Scale::Log : Scale::Linear; }

void emit(const Common& c, const Table& t) {
  if (c.out_path.empty()) {
    write_csv(std::cout, t);
    return;
  }
  std::ofstream f(c.out_path);
  if (!f) {
    throw ConfigError("cannot write " + c.out_path);
  }
  write_csv(f, t);
}

void add_range(CLI::App* sub, const std::string& prefix, Range& r, std::string& scale) {
  sub->add_option("--" + prefix + "-start", r.start, prefix + " range start");
  sub->add_option("--" + prefix + "-stop", r.stop, prefix + " range stop");
  sub->add_option("--" + prefix + "-points", r.points, prefix + " range points");
  sub->add_option("--" + prefix + "-scale", scale, prefix + " range scale")
      ->check(CLI::IsMember({"linear", "log"}));
}

// Rows keep going past a capacity failure; the exit code still reports it.
template <class Rows>
bool any_capacity(const Rows& rows) {
  for (const auto& r : rows) {
    if (r.error.rfind("capacity:", 0) == 0) {
      std::cerr << r.error << '\n';
      return true;
    }
  }
  return false;
}

CouplingReading parse_reading(const std::string& s) {
  return s == "angular" ? CouplingReading::Angular : CouplingReading::PerTwoPi;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state mechanical squeezing in a driven optomechanical cavity"};
  app.require_subcommand(1);

  // point
  Common point_c;
  double point_dq = 0.0;
  double point_lq = 0.0;
  std::string point_reading = "per-2pi";
  auto* point = app.add_subcommand("point", "single operating point report");
  add_common(point, point_c);
  point->add_option("--delta-q-hz", point_dq, "qubit splitting Delta_q/2pi in Hz");
  point->add_option("--lambda-q-hz", point_lq, "qubit coupling as quoted, in Hz");
  point->add_option("--reading", point_reading, "how --lambda-q-hz is read")
      ->check(CLI::IsMember({"per-2pi", "angular"}));

  // fig2
  Common fig2_c;
  Range fig2_p{1e-6, 1e-3, 31, Scale::Log};
  std::string fig2_scale = "log";
  auto* fig2 = app.add_subcommand("fig2", "amplitudes, omega_m' and G'/G versus drive power");
  add_common(fig2, fig2_c);
  add_range(fig2, "p", fig2_p, fig2_scale);

  // fig3
  Common fig3_c;
  Fig3Spec fig3_spec;
  std::string fig3_dscale = "linear";
  std::string fig3_lscale = "linear";
  auto* fig3 = app.add_subcommand("fig3", "squeezing over the (Delta_a, Lambda) plane");
  add_common(fig3, fig3_c);
  add_range(fig3, "delta", fig3_spec.delta_a, fig3_dscale);
  add_range(fig3, "lambda", fig3_spec.lambda, fig3_lscale);

  // fig4
  Common fig4_c;
  Fig4Spec fig4_spec;
  std::string fig4_nscale = "linear";
  std::string fig4_pscale = "log";
  bool fig4_no_analytic = false;
  bool fig4_no_threshold = false;
  auto* fig4 = app.add_subcommand("fig4", "variance versus n_th and versus power at optimal detuning");
  add_common(fig4, fig4_c);
  fig4->add_option("--powers", fig4_spec.powers_w, "powers (W) for the variance-vs-n_th series");
  fig4->add_option("--nth-values", fig4_spec.n_th_values, "n_th values for the variance-vs-P series");
  add_range(fig4, "nth", fig4_spec.n_th, fig4_nscale);
  add_range(fig4, "p", fig4_spec.power, fig4_pscale);
  fig4->add_flag("--no-analytic", fig4_no_analytic, "omit the strong-coupling overlay");
  fig4->add_flag("--no-threshold", fig4_no_threshold, "skip the 3 dB threshold search");

  // fig5
  Common fig5_c;
  Fig5Spec fig5_spec;
  std::string fig5_scale = "log";
  std::string fig5_frame = "squeezed";
  auto* fig5 = app.add_subcommand("fig5", "linear vs nonlinear vs detection variance (desk scale)");
  add_common(fig5, fig5_c);
  add_range(fig5, "p", fig5_spec.power, fig5_scale);
  fig5->add_option("--n-cav", fig5_spec.fock.n_cav, "cavity Fock cutoff")->check(CLI::Range(2, 64));
  fig5->add_option("--n-mech", fig5_spec.fock.n_mech, "mechanical Fock cutoff")->check(CLI::Range(2, 256));
  fig5->add_option("--frame", fig5_frame, "Fock frame")->check(CLI::IsMember({"shifted", "squeezed"}));
  fig5->add_option("--delta-s", fig5_spec.Delta_s, "effective ancilla detuning Delta_s / omega_m");

  // sweep
  Common sweep_c;
  SweepSpec sweep_spec;
  std::string sweep_var = "power";
  std::string sweep_scale = "log";
  bool sweep_fixed = false;
  auto* sweep = app.add_subcommand("sweep", "generic one-parameter sweep");
  add_common(sweep, sweep_c);
  sweep->add_option("--variable", sweep_var, "swept quantity")
      ->check(CLI::IsMember({"power", "detuning", "n_th", "lambda_grid"}));
  sweep->add_option("--start", sweep_spec.range.start, "range start");
  sweep->add_option("--stop", sweep_spec.range.stop, "range stop");
  sweep->add_option("--points", sweep_spec.range.points, "range points");
  sweep->add_option("--scale", sweep_scale, "range scale")->check(CLI::IsMember({"linear", "log"}));
  sweep->add_flag("--fixed-detuning", sweep_fixed, "use delta_a_ratio from the config");
  sweep->add_flag("--with-detection", sweep_spec.detection, "add the 6x6 detection variance");
  sweep->add_flag("--include-nl", sweep_spec.include_nl, "add the Fock variance with H_nl");
  sweep->add_flag("--analytic", sweep_spec.analytic_overlay, "add analytic limits with regime flags");
  sweep->add_option("--n-cav", sweep_spec.fock.n_cav, "cavity Fock cutoff")->check(CLI::Range(2, 64));
  sweep->add_option("--n-mech", sweep_spec.fock.n_mech, "mechanical Fock cutoff")->check(CLI::Range(2, 256));

  // eta-from-qubit
  double q_dq = 5e9;
  double q_lq = 38e6;
  double q_wm = 2e6;
  double q_x = 0.0;
  std::string q_reading = "per-2pi";
  auto* qubit = app.add_subcommand("eta-from-qubit", "Duffing amplitude induced by an ancilla qubit");
  qubit->add_option("--delta-q-hz", q_dq, "qubit splitting Delta_q/2pi in Hz");
  qubit->add_option("--lambda-q-hz", q_lq, "qubit coupling as quoted, in Hz");
  qubit->add_option("--reading", q_reading, "how --lambda-q-hz is read")
      ->check(CLI::IsMember({"per-2pi", "angular"}));
  qubit->add_option("--omega_m_hz", q_wm, "mechanical frequency omega_m/2pi in Hz");
  qubit->add_option("--x-ss", q_x, "stationary displacement X for the backaction check");

  // stability-scan
  Common stab_c;
  Range stab_g0{1e-3, 0.1, 41, Scale::Log};
  std::string stab_scale = "log";
  auto* stab = app.add_subcommand("stability-scan", "eigenvalue and closed-form stability versus g0");
  add_common(stab, stab_c);
  add_range(stab, "g0", stab_g0, stab_scale);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadConfig;
  }

  try {
    if (*point) {
      const SIInput si = resolve(point_c);
      std::optional<QubitAncilla> q;
      if (point_dq > 0.0) {
        q = qubit_from_lab(point_dq, point_lq, parse_reading(point_reading));
      }
      const PointReport rep = run_point(si, run_options(point_c), q);
      if (point_c.out_path.empty()) {
        write_report(std::cout, rep);
      } else {
        std::ofstream f(point_c.out_path);
        write_report(f, rep);
      }
    } else if (*fig2) {
      const SIInput si = resolve(fig2_c);
      fig2_p.scale = parse_scale(fig2_scale);
      emit(fig2_c, fig2_table(si, run_fig2(si, fig2_p, run_options(fig2_c))));
    } else if (*fig3) {
      const SIInput si = resolve(fig3_c);
      fig3_spec.delta_a.scale = parse_scale(fig3_dscale);
      fig3_spec.lambda.scale = parse_scale(fig3_lscale);
      emit(fig3_c, fig3_table(si, run_fig3(si, fig3_spec, run_options(fig3_c))));
    } else if (*fig4) {
      const SIInput si = resolve(fig4_c);
      fig4_spec.n_th.scale = parse_scale(fig4_nscale);
      fig4_spec.power.scale = parse_scale(fig4_pscale);
      fig4_spec.analytic_overlay = !fig4_no_analytic;
      fig4_spec.thresholds = !fig4_no_threshold;
      emit(fig4_c, fig4_table(si, run_fig4(si, fig4_spec, run_options(fig4_c))));
    } else if (*fig5) {
      const SIInput si = resolve(fig5_c);
      fig5_spec.power.scale = parse_scale(fig5_scale);
      fig5_spec.fock.frame = fig5_frame == "shifted" ? Frame::Shifted : Frame::ShiftedAndSqueezed;
      const auto rows = run_fig5(si, fig5_spec, run_options(fig5_c));
      emit(fig5_c, fig5_table(si, fig5_spec, rows));
      if (any_capacity(rows)) {
        return kCapacity;
      }
    } else if (*sweep) {
      const SIInput si = resolve(sweep_c);
      sweep_spec.variable = parse_sweep_variable(sweep_var);
      sweep_spec.range.scale = parse_scale(sweep_scale);
      sweep_spec.optimal_detuning = !sweep_fixed && sweep_spec.variable != SweepVariable::Detuning;
      const auto rows = run_sweep(si, sweep_spec, run_options(sweep_c));
      emit(sweep_c, sweep_table(si, sweep_spec, rows));
      if (any_capacity(rows)) {
        return kCapacity;
      }
    } else if (*qubit) {
      const CouplingReading reading = parse_reading(q_reading);
      const QubitAncilla q = qubit_from_lab(q_dq, q_lq, reading);
      const double eta = duffing_from_qubit(q);
      std::cout << "reading: " << to_string(reading) << '\n'
                << "lambda_over_Delta: " << format_cell(q.lambda_q / q.Delta_q) << '\n'
                << "eta_rad_per_s: " << format_cell(eta) << '\n'
                << "eta_over_2pi_hz: " << format_cell(eta / constants::two_pi) << '\n'
                << "eta_over_omega_m: " << format_cell(eta / (constants::two_pi * q_wm)) << '\n';
      if (dispersive_warning(q)) {
        std::cout << "warning: lambda_q/Delta_q above 0.05\n";
      }
      if (q_x > 0.0) {
        const BackactionCheck b = backaction_check(q, q_x);
        std::cout << "backaction_ratio: " << format_cell(b.ratio) << '\n'
                  << "backaction_ok: " << (b.passes ? "yes" : "no") << '\n';
      }
    } else if (*stab) {
      const SIInput si = resolve(stab_c);
      stab_g0.scale = parse_scale(stab_scale);
      emit(stab_c, stability_table(si, run_stability_scan(si, stab_g0, run_options(stab_c))));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadConfig;
  } catch (const ValidityError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kBadConfig;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kCapacity;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kOk;
}
