#include "tllsta/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>
#include <variant>

#include "json.hpp"

#include "tllsta/error.hpp"
#include "tllsta/observables.hpp"
#include "tllsta/protocols.hpp"

namespace tll {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- output

using Cell = std::variant<double, long long, std::string>;

struct Column {
  std::string name;
  std::string unit;
};

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string csv_cell(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d, precision);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

Json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? Json(*d) : Json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return Json(*i);
  return Json(std::get<std::string>(c));
}

class Writer {
 public:
  Writer(fs::path dir, OutputFormat format, int precision, RunResult& result)
      : dir_(std::move(dir)), format_(format), precision_(precision), result_(result) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::io, dir_.string() + ": cannot create output directory: " + ec.message());
  }

  void table(const std::string& stem, const Table& t) {
    std::ostringstream out;
    if (format_ == OutputFormat::csv) {
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out << ',';
        out << t.columns[i].name;
        if (!t.columns[i].unit.empty()) out << " [" << t.columns[i].unit << ']';
      }
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) out << ',';
          out << csv_cell(row[i], precision_);
        }
        out << '\n';
      }
      write(stem + ".csv", out.str());
    } else {
      Json doc;
      Json columns = Json::array();
      for (const Column& c : t.columns) columns.push_back({{"name", c.name}, {"unit", c.unit}});
      doc["columns"] = columns;
      Json rows = Json::array();
      for (const auto& row : t.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i].name] = json_cell(row[i]);
        rows.push_back(obj);
      }
      doc["rows"] = rows;
      write(stem + ".json", doc.dump(2) + "\n");
    }
  }

  void text(const std::string& name, const std::string& content) { write(name, content); }

 private:
  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::io, path.string() + ": cannot open for writing");
    f << content;
    f.close();
    if (!f) fail(ErrorCode::io, path.string() + ": write failed");
    result_.files.push_back(path.string());
  }

  fs::path dir_;
  OutputFormat format_;
  int precision_;
  RunResult& result_;
};

// One-row table of (quantity, value, unit) records, used for reports.
struct Record {
  Table t{{{"quantity", ""}, {"value", ""}, {"unit", ""}}, {}};

  void add(const std::string& name, Cell value, const std::string& unit = "") {
    t.rows.push_back({name, std::move(value), unit});
  }
};

// ---------------------------------------------------------------- helpers

RunConfig effective(const RunConfig& config, const RunOptions& options) {
  RunConfig c = config;
  if (options.format) c.output.format = *options.format;
  if (options.threads) c.numerics.threads = *options.threads;
  if (options.tol) c.numerics.tol = *options.tol;
  if (!options.out_dir.empty()) c.output.path = options.out_dir;
  validate_config(c);
  return c;
}

std::vector<double> time_grid(double tau, std::size_t samples) {
  std::vector<double> t(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = tau * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  t.back() = tau;
  return t;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. The error of
// the lowest failing index is rethrown, so the outcome does not depend on
// scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string describe(const CouplingSchedule& s) {
  std::string d = std::string(to_string(s.kind)) + "(alpha=" + shortest(s.alpha) + ",tau_q=" + shortest(s.tau_q);
  if (s.kind == CouplingKind::inverse_poly) d += ",B=" + shortest(s.b_coeff);
  return d + ")";
}

enum class Solver { numeric, airy, airy_or_numeric };

Solver solver_for(const RunConfig& c, const CouplingSchedule& s) {
  const bool airy_ok = s.kind == CouplingKind::linear && s.alpha != 0.0;
  switch (c.numerics.method) {
    case MethodPreference::numeric: return Solver::numeric;
    case MethodPreference::airy:
    case MethodPreference::both: return Solver::airy;
    case MethodPreference::automatic: return airy_ok ? Solver::airy_or_numeric : Solver::numeric;
  }
  return Solver::numeric;
}

struct ModeSolver {
  CouplingSchedule schedule;
  OmegaSq omega_sq;
  double gamma0 = 1.0;
  double gamma_dot0 = 0.0;
  NumericOptions numeric;

  ModeSolver(const RunConfig& c, const CouplingSchedule& s)
      : schedule(s), omega_sq(coupling_omega_sq(s)), gamma0(c.protocol.gamma0),
        gamma_dot0(coupling_gamma_dot0(s)) {
    numeric.tol = c.numerics.tol;
    numeric.wkb_shortcut = c.numerics.wkb;
  }

  ErmakovTrajectory run(Solver solver, std::size_t n, double p, std::span<const double> times) const {
    try {
      if (solver == Solver::numeric) {
        return solve_ermakov_numeric(omega_sq, p, schedule.v_f * p, gamma0, gamma_dot0, times, numeric);
      }
      try {
        return solve_linear_ramp_airy(p, schedule.alpha, schedule.tau_q, schedule.v_f, gamma0, times);
      } catch (const Error& e) {
        if (solver == Solver::airy_or_numeric &&
            (e.code() == ErrorCode::overflow || e.code() == ErrorCode::domain)) {
          return solve_ermakov_numeric(omega_sq, p, schedule.v_f * p, gamma0, gamma_dot0, times,
                                       numeric);
        }
        throw;
      }
    } catch (const Error& e) {
      std::string msg = "mode n=" + std::to_string(n) + " (p=" + format_double(p, 6) + "): " + e.what();
      if (e.has_detail() && e.code() == ErrorCode::singularity) {
        msg += " [t=" + format_double(e.detail(), 10) + "]";
      }
      throw Error(e.code(), msg, e.detail());
    }
  }
};

std::vector<ErmakovTrajectory> solve_modes(const ModeSolver& solver, Solver kind,
                                           const std::vector<std::size_t>& modes,
                                           const ModeGrid& grid, std::span<const double> times,
                                           int threads) {
  std::vector<ErmakovTrajectory> out(modes.size());
  parallel_for(modes.size(), threads, [&](std::size_t i) {
    out[i] = solver.run(kind, modes[i], grid.momentum(modes[i]), times);
  });
  return out;
}

ExitCode exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::config:
    case ErrorCode::io: return ExitCode::config;
    case ErrorCode::instability: return ExitCode::stability;
    default: return ExitCode::numeric;
  }
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

void append_trajectories(Table& t, const std::vector<std::size_t>& modes,
                         const std::vector<ErmakovTrajectory>& trajs) {
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const ErmakovTrajectory& tr = trajs[i];
    for (std::size_t k = 0; k < tr.size(); ++k) {
      t.rows.push_back({static_cast<long long>(modes[i]), tr.p, std::string(to_string(tr.method)),
                        tr.times[k], tr.gamma[k], tr.gamma_dot[k], tr.gamma_ddot[k]});
    }
  }
}

Table trajectory_table() {
  return {{{"n", ""},
           {"p", "1/length"},
           {"method", ""},
           {"t", "time"},
           {"gamma", "1"},
           {"gamma_dot", "1/time"},
           {"gamma_ddot", "1/time^2"}},
          {}};
}

std::string fmt(double v) { return format_double(v, 10); }

}  // namespace

// ---------------------------------------------------------------- solve

RunResult cmd_solve(const RunConfig& config, const RunOptions& options) {
  const RunConfig c = effective(config, options);
  RunResult result;
  Writer out(c.output.path, c.output.format, c.output.precision, result);
  out.text("config.toml", emit_config(c));

  try {
    const ModeGrid grid = grid_from(c);
    const CouplingSchedule sched = coupling_from(c);
    const ModeSolver solver(c, sched);
    const Solver kind = solver_for(c, sched);
    const bool both = c.numerics.method == MethodPreference::both;
    const std::vector<double> times = time_grid(sched.tau_q, c.numerics.samples);

    std::vector<std::size_t> all(grid.n_max);
    for (std::size_t n = 1; n <= grid.n_max; ++n) all[n - 1] = n;
    std::vector<ErmakovTrajectory> trajs = solve_modes(solver, kind, all, grid, times, c.numerics.threads);
    const EnergyReport rep =
        energy_report(trajs, grid, solver.omega_sq, sched.tau_q, c.physics.beta0, describe(sched));

    std::vector<std::size_t> emitted;
    if (c.grid.modes.empty()) {
      emitted = all;
    } else {
      for (int m : c.grid.modes) emitted.push_back(static_cast<std::size_t>(m));
    }
    std::vector<ErmakovTrajectory> shown(emitted.size());
    std::vector<std::size_t> extra;
    for (std::size_t i = 0; i < emitted.size(); ++i) {
      if (emitted[i] <= grid.n_max) {
        shown[i] = trajs[emitted[i] - 1];
      } else {
        extra.push_back(i);
      }
    }
    {
      std::vector<std::size_t> extra_modes;
      for (std::size_t i : extra) extra_modes.push_back(emitted[i]);
      auto solved = solve_modes(solver, kind, extra_modes, grid, times, c.numerics.threads);
      for (std::size_t j = 0; j < extra.size(); ++j) shown[extra[j]] = std::move(solved[j]);
    }

    double max_residual = 0.0;
    for (const auto& tr : trajs) max_residual = std::max(max_residual, max_ermakov_residual(tr, solver.omega_sq));

    // Cross-check: the same modes integrated numerically.
    double cross_diff = NAN;
    std::vector<ErmakovTrajectory> shown_numeric;
    if (both) {
      std::vector<std::size_t> check = c.grid.modes.empty() ? all : emitted;
      auto analytic = solve_modes(solver, Solver::airy, check, grid, times, c.numerics.threads);
      auto numeric = solve_modes(solver, Solver::numeric, check, grid, times, c.numerics.threads);
      cross_diff = 0.0;
      for (std::size_t i = 0; i < check.size(); ++i) {
        for (std::size_t k = 0; k < times.size(); ++k) {
          cross_diff = std::max(cross_diff, std::fabs(analytic[i].gamma[k] - numeric[i].gamma[k]));
        }
      }
      if (!c.grid.modes.empty()) shown_numeric = std::move(numeric);
    }

    const double v_f = c.physics.v_f;
    const double r0 = c.grid.r0;
    const double len = c.grid.length;
    const double alpha = sched.alpha;
    const double egs = ground_state_scale(alpha, v_f, r0, len);
    double perturbative = NAN;
    bool advisory = false;
    if (sched.kind == CouplingKind::linear) {
      const PerturbativeResidual pr = perturbative_residual_linear(alpha, sched.tau_q, v_f, r0, len);
      perturbative = pr.value;
      advisory = pr.advisory;
    }
    const double inverse_closed =
        sched.kind == CouplingKind::inverse_poly ? residual_inverse_poly(sched.b_coeff, v_f, r0, len) : NAN;
    const double consistency = rep.mean_energy - rep.adiabatic_energy - rep.residual;

    Record r;
    r.add("protocol", rep.protocol);
    r.add("method", std::string(to_string(c.numerics.method)));
    r.add("alpha", alpha, "velocity");
    r.add("tau_q", rep.tau_q, "time");
    r.add("length", len, "length");
    r.add("r0", r0, "length");
    r.add("n_max", static_cast<long long>(grid.n_max));
    r.add("beta0", rep.beta0, "1/energy");
    r.add("mean_energy", rep.mean_energy, "energy");
    r.add("adiabatic_energy", rep.adiabatic_energy, "energy");
    r.add("sudden_energy", rep.sudden_energy, "energy");
    r.add("residual", rep.residual, "energy");
    r.add("mean_minus_adiabatic_minus_residual", consistency, "energy");
    r.add("adiabatic_energy_continuum", adiabatic_energy(alpha, v_f, r0, len), "energy");
    r.add("sudden_energy_continuum", sudden_energy(alpha, v_f, r0, len), "energy");
    r.add("E_gs", egs, "energy");
    r.add("tau0", tau0(r0, v_f), "time");
    r.add("perturbative_residual", perturbative, "energy");
    r.add("perturbative_advisory", static_cast<long long>(advisory));
    r.add("inverse_poly_residual_closed_form", inverse_closed, "energy");
    r.add("adiabatic_time_bound_n1", adiabatic_time_bound(std::fabs(alpha), len, v_f, 1), "time");
    r.add("max_ermakov_residual", max_residual, "1");
    r.add("airy_numeric_max_abs_diff", cross_diff, "1");
    out.table("report", r.t);

    if (options.emit_trajectories) {
      Table t = trajectory_table();
      append_trajectories(t, emitted, shown);
      if (!shown_numeric.empty()) append_trajectories(t, emitted, shown_numeric);
      out.table("trajectories", t);
    }

    std::ostringstream s;
    s << "solve " << rep.protocol << ": " << grid.n_max << " modes, residual = " << fmt(rep.residual)
      << " (mean " << fmt(rep.mean_energy) << ", adiabatic " << fmt(rep.adiabatic_energy) << ")\n";
    if (both) s << "airy vs numeric max |dgamma| = " << format_double(cross_diff, 3) << "\n";
    if (advisory) s << "note: alpha is not small against v_f/2; the perturbative column is outside its range\n";
    result.summary = s.str();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config || e.code() == ErrorCode::io) throw;
    result.exit_code = exit_for(e);
    result.summary = std::string("solve failed (") + to_string(e.code()) + "): " + first_line(e.what()) + "\n";
  }
  return result;
}

// ---------------------------------------------------------------- sweep

RunResult cmd_sweep(const RunConfig& config, const RunOptions& options) {
  const RunConfig c = effective(config, options);
  RunResult result;
  Writer out(c.output.path, c.output.format, c.output.precision, result);
  out.text("config.toml", emit_config(c));

  const double v_f = c.physics.v_f;
  const double r0 = c.grid.r0;
  const double len = c.grid.length;
  const double t0 = tau0(r0, v_f);
  std::vector<double> alphas = c.sweep.alpha.empty() ? std::vector<double>{c.protocol.alpha} : c.sweep.alpha;
  std::vector<double> taus = c.sweep.tau_q.empty() ? std::vector<double>{c.protocol.tau_q} : c.sweep.tau_q;
  if (c.sweep.tau_in_tau0) {
    for (double& t : taus) t *= t0;
  }
  const double alpha_ref = c.sweep.alpha_ref != 0.0 ? c.sweep.alpha_ref : alphas.front();
  const double egs1 = ground_state_scale(alpha_ref, v_f, r0, len);
  const double degs1 = sudden_energy(alpha_ref, v_f, r0, len) - adiabatic_energy(alpha_ref, v_f, r0, len);
  const ModeGrid grid = grid_from(c);

  Table t{{{"alpha", "velocity"},
           {"tau_q", "time"},
           {"tau_q_over_tau0", "1"},
           {"mean_energy", "energy"},
           {"adiabatic_energy", "energy"},
           {"sudden_energy", "energy"},
           {"residual", "energy"},
           {"residual_over_E_gs1", "1"},
           {"residual_over_dE_gs1", "1"},
           {"perturbative_residual", "energy"},
           {"perturbative_over_E_gs1", "1"},
           {"E_gs1", "energy"},
           {"dE_gs1", "energy"},
           {"status", ""}},
          {}};

  std::size_t failures = 0;
  std::ostringstream s;
  for (double alpha : alphas) {
    for (double tau : taus) {
      std::vector<Cell> row{alpha, tau, tau / t0};
      try {
        RunConfig point = c;
        point.protocol.alpha = alpha;
        point.protocol.tau_q = tau;
        const CouplingSchedule sched = coupling_from(point);
        const ModeSolver solver(point, sched);
        const std::vector<double> times{0.0, tau};
        std::vector<std::size_t> all(grid.n_max);
        for (std::size_t n = 1; n <= grid.n_max; ++n) all[n - 1] = n;
        const auto trajs = solve_modes(solver, solver_for(point, sched), all, grid, times, c.numerics.threads);
        const EnergyReport rep =
            energy_report(trajs, grid, solver.omega_sq, tau, c.physics.beta0, describe(sched));
        const double pert = sched.kind == CouplingKind::linear
                                ? perturbative_residual_linear(alpha, tau, v_f, r0, len).value
                                : NAN;
        row.insert(row.end(), {rep.mean_energy, rep.adiabatic_energy, rep.sudden_energy, rep.residual,
                               rep.residual / egs1, rep.residual / degs1, pert, pert / egs1, egs1, degs1,
                               std::string("ok")});
      } catch (const Error& e) {
        if (e.code() == ErrorCode::io) throw;
        ++failures;
        for (int k = 0; k < 8; ++k) row.emplace_back(NAN);
        row.insert(row.end(), {egs1, degs1, std::string("failed: ") + first_line(e.what())});
        s << "point alpha=" << fmt(alpha) << " tau_q=" << fmt(tau) << " failed: " << first_line(e.what())
          << "\n";
      }
      t.rows.push_back(std::move(row));
    }
  }
  out.table("sweep", t);

  s << "sweep " << to_string(c.protocol.coupling_kind) << ": " << t.rows.size() << " points, "
    << failures << " failed; normalizers at alpha_ref = " << fmt(alpha_ref) << ": E_gs1 = " << fmt(egs1)
    << ", dE_gs1 (sudden - adiabatic) = " << fmt(degs1) << "\n";
  result.summary = s.str();
  if (failures) result.exit_code = ExitCode::numeric;
  return result;
}

// ---------------------------------------------------------------- sta-design

RunResult cmd_sta_design(const RunConfig& config, const RunOptions& options) {
  const RunConfig c = effective(config, options);
  RunResult result;
  Writer out(c.output.path, c.output.format, c.output.precision, result);
  out.text("config.toml", emit_config(c));

  const GammaSchedule g = gamma_schedule_from(c);
  const ProtocolConfig& p = c.protocol;
  const double v_f = c.physics.v_f;
  const double rho0 = c.physics.rho0;
  const double r0 = c.grid.r0;
  const double len = c.grid.length;
  const std::vector<double> times = time_grid(g.tau_q, c.numerics.samples);

  Table t{{{"t", "time"},
           {"gamma", "1"},
           {"gamma_dot", "1/time"},
           {"gamma_ddot", "1/time^2"},
           {"K", "1"},
           {"sigma", "1"},
           {"v_s", "velocity"},
           {"delta", "1/time^2"},
           {"V0", "energy"},
           {"sg_mean_energy", "energy"},
           {"sg_adiabatic_energy", "energy"}},
          {}};

  double delta_min = INFINITY;
  double delta_scale = 0.0;
  double t_min = 0.0;
  double t_violation = NAN;
  GammaValue last;
  double sigma_last = 1.0;
  double energy_last = 0.0;
  double adiabatic_last = 0.0;
  for (double time : times) {
    const GammaValue gv = sta_gamma(g, time);
    double sigma = gv.gamma;
    double sigma_dot = gv.gamma_dot;
    if (p.sigma_kind == SigmaKind::p5) {
      const double s = time / g.tau_q;
      sigma = p.sigma0 + (p.sigma_f - p.sigma0) * poly5(s);
      sigma_dot = (p.sigma_f - p.sigma0) * poly5_d1(s) / g.tau_q;
    }
    const double delta = sine_gordon_gap(gv.gamma, gv.gamma_dot, gv.gamma_ddot, sigma, sigma_dot);
    const double v_s = v_f / (sigma * sigma);
    const double v0 = delta / (2.0 * std::numbers::pi * v_f * rho0);
    const double e = sg_mean_energy(gv.gamma, gv.gamma_dot, gv.gamma_ddot, sigma, sigma_dot, v_f, r0, len);
    const double ead = sg_adiabatic_energy(v_s, r0, len);
    t.rows.push_back({time, gv.gamma, gv.gamma_dot, gv.gamma_ddot, gv.gamma * gv.gamma, sigma, v_s, delta,
                      v0, e, ead});
    if (delta < delta_min) {
      delta_min = delta;
      t_min = time;
    }
    delta_scale = std::max(delta_scale, std::fabs(delta));
    last = gv;
    sigma_last = sigma;
    energy_last = e;
    adiabatic_last = ead;
  }
  for (const auto& row : t.rows) {
    const double delta = std::get<double>(row[7]);
    if (delta < -1.0e-12 * (1.0 + delta_scale)) {
      t_violation = std::get<double>(row[0]);
      break;
    }
  }
  out.table("schedule", t);

  const GammaValue first = sta_gamma(g, 0.0);
  const double rel = std::fabs(energy_last - adiabatic_last) / adiabatic_last;
  const bool stable = std::isnan(t_violation);
  const bool certificate = rel <= 1.0e-8;
  Record v;
  v.add("kind", std::string(to_string(g.kind)));
  v.add("sigma", std::string(to_string(p.sigma_kind)));
  v.add("tau_q", g.tau_q, "time");
  v.add("samples", static_cast<long long>(times.size()));
  v.add("delta_min", delta_min, "1/time^2");
  v.add("t_at_delta_min", t_min, "time");
  v.add("delta_nonnegative", static_cast<long long>(stable));
  v.add("t_first_violation", t_violation, "time");
  v.add("gamma_dot_initial", first.gamma_dot, "1/time");
  v.add("gamma_dot_initial_nonzero", static_cast<long long>(first.gamma_dot != 0.0));
  v.add("gamma_final", last.gamma, "1");
  v.add("gamma_dot_final", last.gamma_dot, "1/time");
  v.add("gamma_ddot_final", last.gamma_ddot, "1/time^2");
  v.add("K_final", last.gamma * last.gamma, "1");
  v.add("v_s_final", v_f / (sigma_last * sigma_last), "velocity");
  v.add("sg_mean_energy_final", energy_last, "energy");
  v.add("sg_adiabatic_energy_final", adiabatic_last, "energy");
  v.add("final_relative_excess", rel, "1");
  v.add("sta_certificate", static_cast<long long>(certificate));
  out.table("verification", v.t);

  std::ostringstream s;
  s << "sta-design " << to_string(g.kind) << " gamma " << fmt(g.gamma0) << " -> " << fmt(g.gamma_f)
    << ", sigma " << to_string(p.sigma_kind) << ": min delta = " << fmt(delta_min) << " at t = " << fmt(t_min)
    << ", final excess = " << format_double(rel, 3) << "\n";
  if (first.gamma_dot != 0.0) {
    s << "note: gamma_dot(0) = " << fmt(first.gamma_dot) << " != 0 (the gap opens suddenly at t = 0)\n";
  }
  if (!stable) {
    s << "stability violation: delta < 0 at t = " << fmt(t_violation) << "\n";
    result.exit_code = ExitCode::stability;
  } else if (!certificate) {
    s << "final sine-Gordon energy differs from the adiabatic value by " << format_double(rel, 3) << "\n";
    result.exit_code = ExitCode::numeric;
  }
  result.summary = s.str();
  return result;
}

// ---------------------------------------------------------------- accidental

RunResult cmd_accidental(const RunConfig& config, const RunOptions& options) {
  const RunConfig c = effective(config, options);
  RunResult result;
  Writer out(c.output.path, c.output.format, c.output.precision, result);
  out.text("config.toml", emit_config(c));

  const ProtocolConfig& p = c.protocol;
  const double v_f = c.physics.v_f;
  const double rho0 = c.physics.rho0;
  std::ostringstream s;

  if (p.gamma_kind == GammaKind::constant_potential) {
    const AccidentalConstant ac = accidental_sta_constant(p.v0, rho0, v_f, p.gamma0, p.gamma_dot0);
    const double unit = 4.0 * std::numbers::pi * v_f * p.v0 * rho0;
    const double tolerance = 1.0e-10 * std::max(1.0, ac.amplitude() * ac.w);
    const int count = std::max(4, p.n_index + 1);
    Table tn{{{"n", ""},
              {"t_n", "time"},
              {"t_n_scaled", "1/(4 pi v_f V0 rho0)"},
              {"gamma", "1"},
              {"gamma_dot", "1/time"},
              {"K", "1"},
              {"degenerate", ""}},
             {}};
    bool residual_ok = true;
    for (int n = 0; n < count; ++n) {
      const double tn_value = ac.t_n(n);
      const GammaValue gv = ac.at(tn_value);
      const bool degenerate = tn_value <= 0.0;
      residual_ok = residual_ok && std::fabs(gv.gamma_dot) < tolerance;
      tn.rows.push_back({static_cast<long long>(n), tn_value, tn_value * unit, gv.gamma, gv.gamma_dot,
                         gv.gamma * gv.gamma, static_cast<long long>(degenerate)});
      s << "t_" << n << " = " << fmt(tn_value) << (degenerate ? " (degenerate)" : "")
        << ", gamma_dot = " << format_double(gv.gamma_dot, 3) << "\n";
    }
    out.table("t_n", tn);

    const double tau = ac.t_n(p.n_index);
    if (tau > 0.0) {
      Table k{{{"t", "time"},
               {"t_scaled", "1/(4 pi v_f V0 rho0)"},
               {"gamma", "1"},
               {"gamma_dot", "1/time"},
               {"K", "1"},
               {"V0", "energy"}},
              {}};
      for (double time : time_grid(tau, c.numerics.samples)) {
        const GammaValue gv = ac.at(time);
        k.rows.push_back({time, time * unit, gv.gamma, gv.gamma_dot, gv.gamma * gv.gamma, p.v0});
      }
      out.table("trajectory", k);
      s << "accidental constant potential: tau_q = t_" << p.n_index << " = " << fmt(tau)
        << ", K(tau_q) = " << fmt(ac.at(tau).gamma * ac.at(tau).gamma) << "\n";
    } else {
      s << "accidental constant potential: t_" << p.n_index
        << " = 0 is degenerate (gamma_dot0 = 0 starts stationary); no trajectory emitted\n";
    }
    if (!residual_ok) {
      s << "|gamma_dot(t_n)| exceeds " << format_double(tolerance, 3) << "\n";
      result.exit_code = ExitCode::numeric;
    }
  } else {
    try {
      const AccidentalLinear al = accidental_sta_linear(p.alpha_ramp, rho0, v_f, p.gamma0);
      Record r;
      r.add("d", al.d, "1/time^3");
      r.add("tau_q", al.tau_q, "time");
      r.add("gamma_final", al.gamma_final, "1");
      r.add("K_initial", p.gamma0 * p.gamma0, "1");
      r.add("K_final", al.k_final, "1");
      r.add("gamma_dot_final", al.residual, "1/time");
      r.add("gamma_dot_max", al.gamma_dot_max, "1/time");
      r.add("gamma_crossed_zero", static_cast<long long>(al.crossed_zero));
      r.add("gamma_zero_crossing", al.crossed_zero ? al.zero_crossing : NAN, "time");
      out.table("root", r.t);
      Table k{{{"t", "time"}, {"gamma", "1"}, {"gamma_dot", "1/time"}, {"K", "1"}, {"V0", "energy"}}, {}};
      for (double time : time_grid(al.tau_q, c.numerics.samples)) {
        const GammaValue gv = al.at(time);
        k.rows.push_back({time, gv.gamma, gv.gamma_dot, gv.gamma * gv.gamma, p.alpha_ramp * time});
      }
      out.table("trajectory", k);
      s << "accidental linear potential: tau_q = " << fmt(al.tau_q) << ", K(tau_q) = " << fmt(al.k_final)
        << " (K(0) = " << fmt(p.gamma0 * p.gamma0) << "), |gamma_dot(tau_q)| = " << format_double(al.residual, 3)
        << "\n";
      if (al.crossed_zero) {
        s << "note: gamma changes sign at t = " << fmt(al.zero_crossing) << " before tau_q\n";
      }
      if (!(al.residual < 1.0e-10)) {
        s << "|gamma_dot(tau_q)| is not below 1e-10\n";
        result.exit_code = ExitCode::numeric;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::config || e.code() == ErrorCode::io) throw;
      result.exit_code = exit_for(e);
      s << "accidental linear potential failed (" << to_string(e.code()) << "): " << first_line(e.what()) << "\n";
    }
  }
  result.summary = s.str();
  return result;
}

// ---------------------------------------------------------------- dispatch

RunResult run_command(const RunConfig& config, const RunOptions& options) {
  if (config.command == "solve") return cmd_solve(config, options);
  if (config.command == "sweep") return cmd_sweep(config, options);
  if (config.command == "sta-design") return cmd_sta_design(config, options);
  if (config.command == "accidental") return cmd_accidental(config, options);
  fail(ErrorCode::config, "run.command: unknown command '" + config.command + "'");
}

RunResult cmd_figure(const std::string& id, const RunOptions& options) {
  const std::vector<PresetRun> runs = preset_runs(id);
  const fs::path base = options.out_dir.empty() ? fs::path(id) : fs::path(options.out_dir);
  RunResult total;
  total.summary = id + ": " + preset_description(id) + "\n";
  for (const PresetRun& run : runs) {
    RunOptions o = options;
    o.emit_trajectories = true;
    o.out_dir = (run.label.empty() ? base : base / run.label).string();
    RunResult r = run_command(run.config, o);
    total.exit_code = std::max(total.exit_code, r.exit_code);
    if (!run.label.empty()) total.summary += "[" + run.label + "] ";
    total.summary += r.summary;
    total.files.insert(total.files.end(), r.files.begin(), r.files.end());
  }
  return total;
}

}  // namespace tll
