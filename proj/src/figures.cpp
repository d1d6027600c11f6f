#include "optosqueeze/figures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <boost/math/tools/toms748_solve.hpp>

#include "optosqueeze/analytic.hpp"
#include "optosqueeze/config.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/gaussian.hpp"
#include "optosqueeze/transform.hpp"

namespace optosqueeze {

namespace {

// Runs f(0..n-1) on up to `jobs` threads; results keep index order.
template <class F>
auto parallel_map(std::size_t n, int jobs, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) {
        return;
      }
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

std::string describe(const std::exception& e) {
  if (dynamic_cast<const StabilityError*>(&e)) {
    return std::string("unstable: ") + e.what();
  }
  if (dynamic_cast<const CapacityError*>(&e)) {
    return std::string("capacity: ") + e.what();
  }
  if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const BranchAmbiguityError*>(&e)) {
    return std::string("solver: ") + e.what();
  }
  if (dynamic_cast<const NumericError*>(&e)) {
    return std::string("numeric: ") + e.what();
  }
  return std::string("error: ") + e.what();
}

std::string cell(bool b) { return b ? "1" : "0"; }
std::string cell(const std::optional<double>& v) { return v ? format_cell(*v) : std::string(); }

std::vector<std::string> base_header(const SIInput& si, const std::string& command) {
  std::vector<std::string> h;
  h.push_back("optosqueeze " + command);
  for (const auto& line : describe_config(si)) {
    h.push_back(line);
  }
  return h;
}

std::string describe_range(const char* name, const Range& r) {
  return std::string(name) + " = " + format_value(r.start) + ".." + format_value(r.stop) + " (" +
         std::to_string(r.points) + " points, " + (r.scale == Scale::Log ? "log" : "linear") + ")";
}

FixedPointOptions fixed_point_options(const RunOptions& opts) {
  FixedPointOptions fo;
  fo.branch = opts.branch;
  return fo;
}

bool drift_stable(const LinearizedModel& lin) {
  return is_stable_eigen(build_quadrature_system(lin).drift).stable;
}

// Mechanical side of the beta balance, M(beta) = g0 |alpha|^2.
double mechanical_load(const SystemParams& p, double beta) {
  if (p.nonlinearity == Nonlinearity::Duffing) {
    return 16.0 * p.eta * beta * beta * beta + (12.0 * p.eta + p.omega_m) * beta;
  }
  return 12.0 * p.eta * beta * beta + p.omega_m * beta + 3.0 * p.eta;
}

Fig3Point fig3_point(const SystemParams& params, double Lambda, double Delta_a) {
  const LinearizedModel lin = model_at_lambda(params, Lambda, Delta_a);
  const TransformedModel t = transformed_model(lin);
  Fig3Point pt;
  pt.Delta_a = Delta_a;
  pt.Lambda = Lambda;
  pt.omega_m_prime = t.omega_m_prime;
  pt.G_prime = t.G_prime;
  pt.stable = drift_stable(lin);
  if (pt.stable) {
    pt.variance = steady_state_variance(lin);
    pt.squeezing_db = squeezing_db(pt.variance);
  }
  return pt;
}

double gaussian_variance(const LinearizedModel& lin) {
  return position_variance(solve_lyapunov(build_quadrature_system(lin)));
}

}  // namespace

// ---------------------------------------------------------------- shared

void Range::check() const {
  if (points < 2) {
    throw DomainError("range needs at least 2 points");
  }
  if (!(start < stop)) {
    throw DomainError("range needs start < stop");
  }
  if (scale == Scale::Log && !(start > 0.0)) {
    throw DomainError("log range needs start > 0");
  }
}

std::vector<double> Range::values() const {
  check();
  std::vector<double> v(static_cast<std::size_t>(points));
  const double n = static_cast<double>(points - 1);
  for (int k = 0; k < points; ++k) {
    const double u = static_cast<double>(k) / n;
    v[static_cast<std::size_t>(k)] =
        scale == Scale::Log ? std::exp(std::log(start) + u * (std::log(stop) - std::log(start)))
                            : start + u * (stop - start);
  }
  v.front() = start;
  v.back() = stop;
  return v;
}

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& line : table.header) {
    out << "# " << line << '\n';
  }
  const auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) {
        out << ',';
      }
      const std::string& f = fields[i];
      if (f.find_first_of(",\"\n\r") != std::string::npos) {
        out << '"';
        for (char c : f) {
          if (c == '"') {
            out << '"';
          }
          out << c;
        }
        out << '"';
      } else {
        out << f;
      }
    }
    out << '\n';
  };
  emit(table.columns);
  for (const auto& row : table.rows) {
    emit(row);
  }
}

OperatingPoint solve_point(const SIInput& si, const RunOptions& opts) {
  return solve_operating_point(to_internal(si), fixed_point_options(opts));
}

LinearizedModel model_at_lambda(const SystemParams& params, double Lambda, double Delta_a) {
  if (!(params.eta > 0.0)) {
    throw DomainError("model_at_lambda: needs eta > 0");
  }
  double beta = 0.0;
  if (params.nonlinearity == Nonlinearity::Duffing) {
    const double floor = 3.0 * params.eta;
    if (Lambda < floor) {
      throw DomainError("model_at_lambda: Lambda below its beta = 0 value 3 eta");
    }
    beta = std::sqrt((Lambda / floor - 1.0) / 4.0);
  } else {
    if (Lambda < 0.0) {
      throw DomainError("model_at_lambda: Lambda must be nonnegative");
    }
    beta = Lambda / (6.0 * params.eta);
  }
  LinearizedModel lin;
  lin.omega_m = params.omega_m;
  lin.kappa = params.kappa;
  lin.gamma = params.gamma;
  lin.n_th = params.n_th;
  lin.Delta_a = Delta_a;
  lin.Lambda = Lambda;
  lin.omega_m_tilde = params.omega_m + 2.0 * Lambda;
  lin.G = std::sqrt(std::max(0.0, params.g0 * mechanical_load(params, beta)));
  return lin;
}

// ---------------------------------------------------------------- fig. 2

std::vector<Fig2Row> run_fig2(const SIInput& si, const Range& power, const RunOptions& opts) {
  const auto values = power.values();
  return parallel_map(values.size(), opts.jobs, [&](std::size_t i) {
    Fig2Row row;
    row.P_w = values[i];
    try {
      SIInput s = si;
      s.power_w = row.P_w;
      s.detection = false;
      const OperatingPoint op = solve_point(s, opts);
      const TransformedModel t = transformed_model(op.linear);
      row.delta_a = op.params.delta_a;
      row.alpha_abs = std::abs(op.fixed_point.alpha);
      row.beta = op.fixed_point.beta;
      row.omega_m_prime_ratio = t.omega_m_prime / op.linear.omega_m;
      row.G_prime_over_G = std::pow(1.0 + 4.0 * op.linear.Lambda / op.linear.omega_m, -0.25);
      row.stable = drift_stable(op.linear);
      if (si.detection) {
        s.detection = true;
        const OperatingPoint od = solve_point(s, opts);
        row.alpha_s_abs = od.fixed_point.alpha_s ? std::abs(*od.fixed_point.alpha_s) : 0.0;
        row.beta_with_detection = od.fixed_point.beta;
      }
    } catch (const Error& e) {
      row.error = describe(e);
    }
    return row;
  });
}

Table fig2_table(const SIInput& si, const std::vector<Fig2Row>& rows) {
  Table t;
  t.header = base_header(si, "fig2");
  t.columns = {"P_w", "delta_a", "alpha_abs", "beta", "omega_m_prime_ratio", "G_prime_over_G", "stable"};
  if (si.detection) {
    t.columns.insert(t.columns.end(), {"alpha_s_abs", "beta_with_detection"});
  }
  t.columns.push_back("error");
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    std::vector<std::string> cells = {format_cell(r.P_w)};
    if (ok) {
      cells.insert(cells.end(), {format_cell(r.delta_a), format_cell(r.alpha_abs), format_cell(r.beta),
                                 format_cell(r.omega_m_prime_ratio), format_cell(r.G_prime_over_G),
                                 cell(r.stable)});
    } else {
      cells.insert(cells.end(), {"", "", "", "", "", cell(false)});
    }
    if (si.detection) {
      cells.push_back(cell(r.alpha_s_abs));
      cells.push_back(cell(r.beta_with_detection));
    }
    cells.push_back(r.error);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

// ---------------------------------------------------------------- fig. 3

Fig3Data run_fig3(const SIInput& si, const Fig3Spec& spec, const RunOptions& opts) {
  const SystemParams params = to_internal(si);
  Fig3Data data;
  data.delta_values = spec.delta_a.values();
  data.lambda_values = spec.lambda.values();
  const auto& deltas = data.delta_values;

  struct Column {
    std::vector<Fig3Point> grid;
    Fig3Point optimal;
    std::vector<Fig3Point> contour;
  };
  const auto columns = parallel_map(data.lambda_values.size(), opts.jobs, [&](std::size_t i) {
    const double Lambda = data.lambda_values[i];
    Column col;
    for (double d : deltas) {
      col.grid.push_back(fig3_point(params, Lambda, d));
    }
    col.optimal = fig3_point(params, Lambda, omega_prime(Lambda, params.omega_m));
    for (std::size_t j = 0; j + 1 < col.grid.size(); ++j) {
      const Fig3Point& a = col.grid[j];
      const Fig3Point& b = col.grid[j + 1];
      if (!a.stable || !b.stable) {
        continue;
      }
      const double fa = a.variance - 0.25;
      const double fb = b.variance - 0.25;
      if (fa == 0.0) {
        col.contour.push_back(a);
        continue;
      }
      if (fa * fb >= 0.0) {
        continue;
      }
      const auto f = [&](double d) { return fig3_point(params, Lambda, d).variance - 0.25; };
      const auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-13 * std::max(1.0, std::abs(x)); };
      std::uintmax_t iters = 100;
      const auto br = boost::math::tools::toms748_solve(f, a.Delta_a, b.Delta_a, fa, fb, tol, iters);
      const Fig3Point p1 = fig3_point(params, Lambda, br.first);
      const Fig3Point p2 = fig3_point(params, Lambda, br.second);
      col.contour.push_back(std::abs(p1.variance - 0.25) <= std::abs(p2.variance - 0.25) ? p1 : p2);
    }
    return col;
  });
  for (const auto& col : columns) {
    data.grid.insert(data.grid.end(), col.grid.begin(), col.grid.end());
    data.optimal.push_back(col.optimal);
    data.contour.insert(data.contour.end(), col.contour.begin(), col.contour.end());
  }
  return data;
}

Table fig3_table(const SIInput& si, const Fig3Data& data) {
  Table t;
  t.header = base_header(si, "fig3");
  if (!data.delta_values.empty() && !data.lambda_values.empty()) {
    t.header.push_back("Delta_a grid = " + format_value(data.delta_values.front()) + ".." +
                       format_value(data.delta_values.back()) + " (" +
                       std::to_string(data.delta_values.size()) + " points)");
    t.header.push_back("Lambda grid = " + format_value(data.lambda_values.front()) + ".." +
                       format_value(data.lambda_values.back()) + " (" +
                       std::to_string(data.lambda_values.size()) + " points)");
  }
  t.header.push_back("series: grid, optimal (Delta_a = omega_m'), contour_3db (variance = 1/4)");
  t.columns = {"series", "Delta_a", "Lambda", "omega_m_prime", "G_prime", "stable", "variance", "squeezing_db"};
  const auto add = [&](const char* series, const Fig3Point& p) {
    t.rows.push_back({series, format_cell(p.Delta_a), format_cell(p.Lambda), format_cell(p.omega_m_prime),
                      format_cell(p.G_prime), cell(p.stable), p.stable ? format_cell(p.variance) : "",
                      p.stable ? format_cell(p.squeezing_db) : ""});
  };
  for (const auto& p : data.grid) add("grid", p);
  for (const auto& p : data.optimal) add("optimal", p);
  for (const auto& p : data.contour) add("contour_3db", p);
  return t;
}

// ---------------------------------------------------------------- fig. 4

std::optional<double> threshold_power(const SIInput& si, double p_lo, double p_hi, const RunOptions& opts) {
  if (!(p_lo > 0.0) || !(p_lo < p_hi)) {
    throw DomainError("threshold_power: need 0 < p_lo < p_hi");
  }
  SIInput s = si;
  s.delta_a_ratio.reset();
  s.detection = false;
  const auto f = [&](double log_p) {
    s.power_w = std::exp(log_p);
    return gaussian_variance(solve_point(s, opts).linear) - 0.25;
  };
  const double a = std::log(p_lo);
  const double b = std::log(p_hi);
  const double fa = f(a);
  const double fb = f(b);
  if (!(fa > 0.0) || !(fb < 0.0)) {
    return std::nullopt;
  }
  const auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-12 * std::max(1.0, std::abs(x)); };
  std::uintmax_t iters = 200;
  const auto br = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return std::exp(0.5 * (br.first + br.second));
}

std::vector<Fig4Row> run_fig4(const SIInput& si, const Fig4Spec& spec, const RunOptions& opts) {
  SIInput base = si;
  base.delta_a_ratio.reset();
  base.detection = false;

  const auto row_for = [&](const char* series, const OperatingPoint& op, double P, double n_th) {
    Fig4Row row;
    row.series = series;
    row.P_w = P;
    row.n_th = n_th;
    row.delta_a = op.params.delta_a;
    LinearizedModel lin = op.linear;
    lin.n_th = n_th;
    row.stable = drift_stable(lin);
    if (row.stable) {
      row.variance = gaussian_variance(lin);
      row.squeezing_db = squeezing_db(row.variance);
    }
    if (spec.analytic_overlay) {
      const TransformedModel t = transformed_model(lin);
      const bool near_optimal = std::abs(lin.Delta_a - t.omega_m_prime) <= 1e-6 * t.omega_m_prime;
      row.analytic_applicable = near_optimal && strong_coupling_regime(t.G_prime, lin.kappa, t.omega_m_prime);
      if (row.analytic_applicable) {
        row.analytic_variance = variance_strong_coupling(lin.gamma, n_th, t.G_prime, lin.kappa, t.r);
      }
    }
    return row;
  };
  const auto failed = [](const char* series, double P, double n_th, const Error& e) {
    Fig4Row row;
    row.series = series;
    row.P_w = P;
    row.n_th = n_th;
    row.error = describe(e);
    return row;
  };

  std::vector<Fig4Row> out;
  const auto n_values = spec.n_th.values();
  const auto by_power = parallel_map(spec.powers_w.size(), opts.jobs, [&](std::size_t i) {
    std::vector<Fig4Row> rows;
    const double P = spec.powers_w[i];
    try {
      SIInput s = base;
      s.power_w = P;
      const OperatingPoint op = solve_point(s, opts);
      for (double n : n_values) {
        try {
          rows.push_back(row_for("vs_n_th", op, P, n));
        } catch (const Error& e) {
          rows.push_back(failed("vs_n_th", P, n, e));
        }
      }
    } catch (const Error& e) {
      for (double n : n_values) {
        rows.push_back(failed("vs_n_th", P, n, e));
      }
    }
    return rows;
  });
  for (const auto& rows : by_power) {
    out.insert(out.end(), rows.begin(), rows.end());
  }

  const auto p_values = spec.power.values();
  const auto by_p = parallel_map(p_values.size(), opts.jobs, [&](std::size_t i) {
    std::vector<Fig4Row> rows;
    const double P = p_values[i];
    try {
      SIInput s = base;
      s.power_w = P;
      const OperatingPoint op = solve_point(s, opts);
      for (double n : spec.n_th_values) {
        try {
          rows.push_back(row_for("vs_power", op, P, n));
        } catch (const Error& e) {
          rows.push_back(failed("vs_power", P, n, e));
        }
      }
    } catch (const Error& e) {
      for (double n : spec.n_th_values) {
        rows.push_back(failed("vs_power", P, n, e));
      }
    }
    return rows;
  });
  // Group the P series by n_th so each curve is contiguous.
  for (std::size_t k = 0; k < spec.n_th_values.size(); ++k) {
    for (const auto& rows : by_p) {
      out.push_back(rows[k]);
    }
  }

  if (spec.thresholds) {
    const auto thr = parallel_map(spec.n_th_values.size(), opts.jobs, [&](std::size_t k) {
      const double n = spec.n_th_values[k];
      try {
        SIInput s = base;
        s.n_th = n;
        const auto P = threshold_power(s, spec.power.start, spec.power.stop, opts);
        if (!P) {
          Fig4Row row;
          row.series = "threshold_3db";
          row.n_th = n;
          row.error = "no 3 dB crossing in the power range";
          return row;
        }
        s.power_w = *P;
        return row_for("threshold_3db", solve_point(s, opts), *P, n);
      } catch (const Error& e) {
        return failed("threshold_3db", 0.0, n, e);
      }
    });
    out.insert(out.end(), thr.begin(), thr.end());
  }
  return out;
}

Table fig4_table(const SIInput& si, const std::vector<Fig4Row>& rows) {
  Table t;
  t.header = base_header(si, "fig4");
  t.header.push_back("all points at the optimal detuning Delta_a = omega_m'");
  t.columns = {"series", "P_w", "n_th", "delta_a", "stable", "variance", "squeezing_db",
               "analytic_variance", "analytic_applicable", "error"};
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    const bool show = ok && r.stable;
    t.rows.push_back({r.series, ok || r.P_w > 0.0 ? format_cell(r.P_w) : "", format_cell(r.n_th),
                      ok ? format_cell(r.delta_a) : "", cell(ok && r.stable),
                      show ? format_cell(r.variance) : "", show ? format_cell(r.squeezing_db) : "",
                      cell(r.analytic_variance), cell(r.analytic_applicable), r.error});
  }
  return t;
}

// ---------------------------------------------------------------- fig. 5

OperatingPoint solve_with_ancilla_detuning(const SystemParams& params, double Delta_s,
                                           const FixedPointOptions& options) {
  if (!params.detection) {
    throw DomainError("solve_with_ancilla_detuning: detection parameters missing");
  }
  SystemParams p = params;
  double last = 0.0;
  for (int k = 0; k < 100; ++k) {
    OperatingPoint op = solve_operating_point(p, options);
    last = *op.linear.Delta_s - Delta_s;
    if (std::abs(last) <= 1e-12 * std::max(1.0, std::abs(Delta_s))) {
      return op;
    }
    p.detection->delta_s = Delta_s + 2.0 * p.detection->g_s * op.fixed_point.beta;
  }
  throw ConvergenceError("ancilla detuning did not settle", std::abs(last));
}

std::vector<Fig5Row> run_fig5(const SIInput& si, const Fig5Spec& spec, const RunOptions& opts) {
  const auto values = spec.power.values();
  return parallel_map(values.size(), opts.jobs, [&](std::size_t i) {
    Fig5Row row;
    row.P_w = values[i];
    try {
      SIInput s = si;
      s.power_w = row.P_w;
      s.delta_a_ratio.reset();
      s.detection = false;
      const OperatingPoint op = solve_point(s, opts);
      row.drive_amplitude = op.params.drive_amplitude;
      row.delta_a = op.params.delta_a;
      row.stable = drift_stable(op.linear);
      if (!row.stable) {
        row.error = "unstable: linearized drift has an eigenvalue with nonnegative real part";
        return row;
      }
      row.variance_linear = gaussian_variance(op.linear);

      s.detection = true;
      const OperatingPoint od =
          solve_with_ancilla_detuning(to_internal(s), spec.Delta_s, fixed_point_options(opts));
      row.variance_detection = gaussian_variance(od.linear);

      FockConfig cfg = spec.fock;
      cfg.include_nl = true;
      cfg.include_detection = false;
      const FockSteadyState st = steady_state(build_liouvillian(op.linear, op.params, op.fixed_point, cfg));
      row.variance_nl = st.variance_X;
      row.fock_converged = st.cutoff_converged;
    } catch (const Error& e) {
      row.error = describe(e);
    }
    return row;
  });
}

Table fig5_table(const SIInput& si, const Fig5Spec& spec, const std::vector<Fig5Row>& rows) {
  Table t;
  t.header = base_header(si, "fig5");
  t.header.push_back(describe_range("power_w", spec.power));
  t.header.push_back("fock cutoffs n_cav = " + std::to_string(spec.fock.n_cav) +
                     ", n_mech = " + std::to_string(spec.fock.n_mech) + ", frame = " +
                     (spec.fock.frame == Frame::Shifted ? "shifted" : "squeezed"));
  t.header.push_back("Delta_a = omega_m', Delta_s = " + format_value(spec.Delta_s));
  t.columns = {"P_w", "drive_amplitude", "delta_a", "stable", "variance_linear", "variance_nl",
               "variance_detection", "fock_converged", "error"};
  for (const auto& r : rows) {
    const bool lin_ok = r.stable && r.variance_linear > 0.0;
    t.rows.push_back({format_cell(r.P_w), r.drive_amplitude > 0.0 ? format_cell(r.drive_amplitude) : "",
                      r.delta_a != 0.0 ? format_cell(r.delta_a) : "", cell(r.stable),
                      lin_ok ? format_cell(r.variance_linear) : "", cell(r.variance_nl),
                      cell(r.variance_detection), cell(r.fock_converged), r.error});
  }
  return t;
}

// ---------------------------------------------------------------- sweeps

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "power") return SweepVariable::Power;
  if (name == "detuning") return SweepVariable::Detuning;
  if (name == "n_th") return SweepVariable::NTh;
  if (name == "lambda_grid") return SweepVariable::LambdaGrid;
  throw ConfigError("unknown sweep variable '" + name + "' (power, detuning, n_th, lambda_grid)");
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Power: return "power";
    case SweepVariable::Detuning: return "detuning";
    case SweepVariable::NTh: return "n_th";
    case SweepVariable::LambdaGrid: return "lambda_grid";
  }
  return "power";
}

std::vector<PointSummary> run_sweep(const SIInput& si, const SweepSpec& spec, const RunOptions& opts) {
  const auto values = spec.range.values();
  return parallel_map(values.size(), opts.jobs, [&](std::size_t i) {
    PointSummary row;
    row.value = values[i];
    try {
      SIInput s = si;
      s.detection = false;
      if (spec.optimal_detuning) {
        s.delta_a_ratio.reset();
      }
      OperatingPoint op;
      switch (spec.variable) {
        case SweepVariable::Power:
          s.power_w = row.value;
          op = solve_point(s, opts);
          break;
        case SweepVariable::Detuning:
          s.delta_a_ratio = row.value;
          op = solve_point(s, opts);
          break;
        case SweepVariable::NTh:
          s.n_th = row.value;
          op = solve_point(s, opts);
          break;
        case SweepVariable::LambdaGrid: {
          op.params = to_internal(s);
          const double Delta =
              s.delta_a_ratio ? *s.delta_a_ratio : omega_prime(row.value, op.params.omega_m);
          op.linear = model_at_lambda(op.params, row.value, Delta);
          op.params.delta_a = Delta;
          op.params.detuning = DetuningMode::Fixed;
          op.fixed_point.alpha = op.params.g0 > 0.0 ? op.linear.G / op.params.g0 : 0.0;
          op.fixed_point.beta =
              op.params.nonlinearity == Nonlinearity::Duffing
                  ? std::sqrt(std::max(0.0, (row.value / (3.0 * op.params.eta) - 1.0) / 4.0))
                  : row.value / (6.0 * op.params.eta);
          break;
        }
      }
      const LinearizedModel& lin = op.linear;
      const TransformedModel t = transformed_model(lin);
      row.delta_a = op.params.delta_a;
      row.Delta_a = lin.Delta_a;
      row.alpha_abs = std::abs(op.fixed_point.alpha);
      row.beta = op.fixed_point.beta;
      row.Lambda = lin.Lambda;
      row.G = lin.G;
      row.r = t.r;
      row.omega_m_prime = t.omega_m_prime;
      row.G_prime = t.G_prime;
      row.n_th_prime = t.n_th_prime;
      const EigenVerdict ev = is_stable_eigen(build_quadrature_system(lin).drift);
      row.stable = ev.stable;
      row.margin = ev.margin;
      row.criterion = is_stable_criterion(lin);
      if (!row.stable) {
        return row;
      }
      row.variance = gaussian_variance(lin);
      row.squeezing_db = squeezing_db(row.variance);
      if (spec.analytic_overlay) {
        const AnalyticEstimate e = analytic_estimate(lin);
        row.analytic_cooling = e.cooling_limit_variance;
        row.cooling_applicable = e.cooling_limit_applicable;
        row.analytic_strong = e.strong_coupling_variance;
        row.strong_applicable = e.strong_coupling_applicable;
      }
      if (spec.detection && spec.variable != SweepVariable::LambdaGrid) {
        SIInput sd = s;
        sd.detection = true;
        row.variance_detection = gaussian_variance(solve_point(sd, opts).linear);
      }
      if (spec.include_nl && spec.variable != SweepVariable::LambdaGrid) {
        FockConfig cfg = spec.fock;
        cfg.include_nl = true;
        cfg.include_detection = false;
        row.variance_nl =
            steady_state(build_liouvillian(op.linear, op.params, op.fixed_point, cfg)).variance_X;
      }
    } catch (const Error& e) {
      row.error = describe(e);
    }
    return row;
  });
}

Table sweep_table(const SIInput& si, const SweepSpec& spec, const std::vector<PointSummary>& rows) {
  Table t;
  t.header = base_header(si, "sweep");
  t.header.push_back(describe_range(to_string(spec.variable).c_str(), spec.range));
  t.header.push_back(std::string("optimal_detuning = ") + (spec.optimal_detuning ? "on" : "off"));
  t.columns = {to_string(spec.variable), "delta_a", "Delta_a", "alpha_abs", "beta", "Lambda", "G", "r",
               "omega_m_prime", "G_prime", "n_th_prime", "stable", "margin", "criterion", "variance",
               "squeezing_db"};
  if (spec.analytic_overlay) {
    t.columns.insert(t.columns.end(), {"analytic_cooling", "cooling_applicable", "analytic_strong",
                                       "strong_applicable"});
  }
  if (spec.detection) t.columns.push_back("variance_detection");
  if (spec.include_nl) t.columns.push_back("variance_nl");
  t.columns.push_back("error");
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    const bool show = ok && r.stable;
    std::vector<std::string> c = {format_cell(r.value)};
    if (ok) {
      c.insert(c.end(), {format_cell(r.delta_a), format_cell(r.Delta_a), format_cell(r.alpha_abs),
                         format_cell(r.beta), format_cell(r.Lambda), format_cell(r.G), format_cell(r.r),
                         format_cell(r.omega_m_prime), format_cell(r.G_prime), format_cell(r.n_th_prime),
                         cell(r.stable), format_cell(r.margin), to_string(r.criterion)});
    } else {
      c.insert(c.end(), {"", "", "", "", "", "", "", "", "", "", cell(false), "", ""});
    }
    c.push_back(show ? format_cell(r.variance) : "");
    c.push_back(show ? format_cell(r.squeezing_db) : "");
    if (spec.analytic_overlay) {
      c.insert(c.end(), {show ? cell(r.analytic_cooling) : "", cell(r.cooling_applicable),
                         show ? cell(r.analytic_strong) : "", cell(r.strong_applicable)});
    }
    if (spec.detection) c.push_back(cell(r.variance_detection));
    if (spec.include_nl) c.push_back(cell(r.variance_nl));
    c.push_back(r.error);
    t.rows.push_back(std::move(c));
  }
  return t;
}

// ---------------------------------------------------------------- stability scan

std::vector<StabilityRow> run_stability_scan(const SIInput& si, const Range& g0, const RunOptions& opts) {
  const auto values = g0.values();
  return parallel_map(values.size(), opts.jobs, [&](std::size_t i) {
    StabilityRow row;
    row.g0 = values[i];
    try {
      SIInput s = si;
      s.g0_ratio = row.g0;
      s.detection = false;
      const OperatingPoint op = solve_point(s, opts);
      const LinearizedModel& lin = op.linear;
      row.delta_a = op.params.delta_a;
      row.Delta_a = lin.Delta_a;
      row.omega_m_prime = omega_prime(lin.Lambda, lin.omega_m);
      row.G = lin.G;
      const EigenVerdict ev = is_stable_eigen(drift_matrix(lin));
      row.stable_eigen = ev.stable;
      row.margin = ev.margin;
      row.criterion = is_stable_criterion(lin);
      row.criterion_with_damping = is_stable_criterion_with_damping(lin);
      row.below_threshold = row.g0 < optimal_point_threshold(op.params.omega_m, op.params.eta);
    } catch (const Error& e) {
      row.error = describe(e);
    }
    return row;
  });
}

Table stability_table(const SIInput& si, const std::vector<StabilityRow>& rows) {
  Table t;
  t.header = base_header(si, "stability-scan");
  const double threshold = std::sqrt(27.0 * si.eta_ratio);
  t.header.push_back("g0 threshold sqrt(27 eta) = " + format_cell(threshold));
  t.columns = {"g0_ratio", "delta_a", "Delta_a", "omega_m_prime", "G", "margin", "stable",
               "criterion", "criterion_with_damping", "below_threshold", "error"};
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    if (ok) {
      t.rows.push_back({format_cell(r.g0), format_cell(r.delta_a), format_cell(r.Delta_a),
                        format_cell(r.omega_m_prime), format_cell(r.G), format_cell(r.margin),
                        cell(r.stable_eigen), to_string(r.criterion), to_string(r.criterion_with_damping),
                        cell(r.below_threshold), ""});
    } else {
      t.rows.push_back({format_cell(r.g0), "", "", "", "", "", cell(false), "", "", "", r.error});
    }
  }
  return t;
}

// ---------------------------------------------------------------- single point

PointReport run_point(const SIInput& si, const RunOptions& opts, const std::optional<QubitAncilla>& qubit) {
  PointReport rep;
  rep.input = si;
  const SystemParams params = to_internal(si);
  rep.warnings = validate(params);
  const OperatingPoint op = solve_operating_point(params, fixed_point_options(opts));
  rep.params = op.params;
  rep.fixed_point = op.fixed_point;
  rep.linear = op.linear;
  const TransformedModel t = transformed_model(op.linear);
  rep.r = t.r;
  rep.omega_m_prime = t.omega_m_prime;
  rep.G_prime = t.G_prime;
  rep.n_th_prime = t.n_th_prime;
  const EigenVerdict ev = is_stable_eigen(build_quadrature_system(op.linear).drift);
  rep.stable = ev.stable;
  rep.margin = ev.margin;
  rep.criterion = is_stable_criterion(op.linear);
  rep.criterion_with_damping = is_stable_criterion_with_damping(op.linear);
  rep.g0_threshold = optimal_point_threshold(params.omega_m, params.eta);
  if ((rep.criterion == CriterionVerdict::Stable) != rep.stable &&
      rep.criterion != CriterionVerdict::NotApplicable) {
    rep.warnings.push_back("closed-form stability criterion disagrees with the eigenvalue test");
  }
  if (rep.stable) {
    rep.variance = gaussian_variance(op.linear);
    rep.squeezing_db = squeezing_db(*rep.variance);
    const AnalyticEstimate e = analytic_estimate(op.linear);
    rep.analytic_cooling = e.cooling_limit_variance;
    rep.cooling_applicable = e.cooling_limit_applicable;
    rep.analytic_strong = e.strong_coupling_variance;
    rep.strong_applicable = e.strong_coupling_applicable;
  }
  if (qubit) {
    rep.eta_from_qubit = duffing_from_qubit(*qubit) / (constants::two_pi * si.omega_m_hz);
    if (dispersive_warning(*qubit)) {
      rep.warnings.push_back("lambda_q/Delta_q above 0.05; dispersive expansion is marginal");
    }
  }
  return rep;
}

void write_report(std::ostream& out, const PointReport& rep) {
  const auto line = [&](const char* key, const std::string& value) { out << key << ": " << value << '\n'; };
  const auto num = [](double v) { return format_cell(v); };
  for (const auto& l : describe_config(rep.input)) {
    out << "# " << l << '\n';
  }
  line("delta_a", num(rep.params.delta_a));
  line("drive_amplitude", num(rep.params.drive_amplitude));
  line("alpha", num(rep.fixed_point.alpha.real()) + (rep.fixed_point.alpha.imag() < 0 ? " - " : " + ") +
                    num(std::abs(rep.fixed_point.alpha.imag())) + "i");
  line("alpha_abs", num(std::abs(rep.fixed_point.alpha)));
  line("beta", num(rep.fixed_point.beta));
  if (rep.fixed_point.alpha_s) {
    line("alpha_s_abs", num(std::abs(*rep.fixed_point.alpha_s)));
  }
  line("fixed_point_residual", num(rep.fixed_point.residual));
  line("Delta_a", num(rep.linear.Delta_a));
  line("omega_m_tilde", num(rep.linear.omega_m_tilde));
  line("Lambda", num(rep.linear.Lambda));
  line("G", num(rep.linear.G));
  if (rep.linear.has_detection()) {
    line("Delta_s", num(*rep.linear.Delta_s));
    line("G_s", num(*rep.linear.G_s));
    line("Gamma_s", num(detection_cooling_rate(*rep.linear.G_s, *rep.linear.kappa_s)));
  }
  line("r", num(rep.r));
  line("omega_m_prime", num(rep.omega_m_prime));
  line("G_prime", num(rep.G_prime));
  line("n_th_prime", num(rep.n_th_prime));
  line("stable", rep.stable ? "yes" : "no");
  line("eigen_margin", num(rep.margin));
  line("criterion", to_string(rep.criterion));
  line("criterion_with_damping", to_string(rep.criterion_with_damping));
  line("g0_threshold", num(rep.g0_threshold));
  if (rep.variance) {
    line("variance", num(*rep.variance));
    line("squeezing_db", num(*rep.squeezing_db));
    line("analytic_cooling_limit", num(rep.analytic_cooling) + (rep.cooling_applicable ? "" : " (out of regime)"));
    line("analytic_strong_coupling", num(rep.analytic_strong) + (rep.strong_applicable ? "" : " (out of regime)"));
  } else {
    line("variance", "none (unstable)");
  }
  if (rep.eta_from_qubit) {
    line("eta_from_qubit", num(*rep.eta_from_qubit));
  }
  for (const auto& w : rep.warnings) {
    line("warning", w);
  }
}

}  // namespace optosqueeze
