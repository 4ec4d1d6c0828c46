#include "tllsta/tllsta.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "tllsta/commands.hpp"
#include "tllsta/config.hpp"
#include "tllsta/error.hpp"
#include "tllsta/ermakov.hpp"
#include "tllsta/observables.hpp"
#include "tllsta/protocols.hpp"
#include "tllsta/specfun.hpp"

struct tll_trajectory {
  tll::ErmakovTrajectory traj;
};

struct tll_config {
  tll::RunConfig config;
};

struct tll_result {
  tll::RunResult result;
};

namespace {

thread_local std::string g_error;
thread_local double g_detail = NAN;

tll_status record(tll_status status, const std::string& message, double detail = NAN) {
  g_error = message;
  g_detail = detail;
  return status;
}

template <typename Fn>
tll_status guarded(Fn&& fn) {
  try {
    fn();
    return TLL_OK;
  } catch (const tll::Error& e) {
    return record(static_cast<tll_status>(e.code()), e.what(), e.detail());
  } catch (const std::bad_alloc&) {
    return record(TLL_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(TLL_E_INTERNAL, e.what());
  } catch (...) {
    return record(TLL_E_INTERNAL, "unknown exception");
  }
}

tll_status null_argument(const char* name) {
  return record(TLL_E_NULL_ARGUMENT, std::string(name) + " must not be NULL");
}

tll::RunOptions convert(const tll_run_options* o) {
  tll::RunOptions r;
  if (!o) return r;
  if (o->out_dir) r.out_dir = o->out_dir;
  if (o->format == TLL_FORMAT_CSV) r.format = tll::OutputFormat::csv;
  if (o->format == TLL_FORMAT_JSON) r.format = tll::OutputFormat::json;
  if (o->threads != 0) r.threads = o->threads;
  if (o->tol != 0.0) r.tol = o->tol;
  r.emit_trajectories = o->emit_trajectories != 0;
  return r;
}

}  // namespace

extern "C" {

const char* tll_version(void) { return "1.0.0"; }

const char* tll_status_string(tll_status status) {
  switch (status) {
    case TLL_OK: return "ok";
    case TLL_E_NULL_ARGUMENT: return "null argument";
    case TLL_E_INTERNAL: return "internal error";
    default:
      if (status >= TLL_E_DOMAIN && status <= TLL_E_IO) {
        return tll::to_string(static_cast<tll::ErrorCode>(status));
      }
      return "unknown status";
  }
}

const char* tll_last_error(void) { return g_error.c_str(); }
double tll_last_error_detail(void) { return g_detail; }

tll_status tll_airy(double z, double out[4]) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const tll::AiryQuad q = tll::airy(z);
    out[0] = q.ai;
    out[1] = q.ai_prime;
    out[2] = q.bi;
    out[3] = q.bi_prime;
  });
}

tll_status tll_gamma0(double x, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = tll::gamma0(x); });
}

tll_status tll_adiabatic_energy(double alpha, double v_f, double r0, double length, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = tll::adiabatic_energy(alpha, v_f, r0, length); });
}

tll_status tll_sudden_energy(double alpha, double v_f, double r0, double length, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = tll::sudden_energy(alpha, v_f, r0, length); });
}

tll_status tll_perturbative_residual_linear(double alpha, double tau_q, double v_f, double r0,
                                           double length, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = tll::perturbative_residual_linear(alpha, tau_q, v_f, r0, length).value; });
}

tll_status tll_residual_inverse_poly(double b_coeff, double v_f, double r0, double length, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = tll::residual_inverse_poly(b_coeff, v_f, r0, length); });
}

tll_status tll_linear_ramp_solve(double p, double alpha, double tau_q, double v_f, double gamma0,
                                 const double* times, size_t count, tll_method method, double tol,
                                 tll_trajectory** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!times && count) return null_argument("times");
  return guarded([&] {
    std::span<const double> t(times, count);
    auto handle = std::make_unique<tll_trajectory>();
    if (method == TLL_METHOD_AIRY) {
      handle->traj = tll::solve_linear_ramp_airy(p, alpha, tau_q, v_f, gamma0, t);
    } else if (method == TLL_METHOD_NUMERIC) {
      const tll::CouplingSchedule s =
          tll::make_coupling_schedule(tll::CouplingKind::linear, alpha, tau_q, v_f);
      tll::NumericOptions options;
      if (tol != 0.0) options.tol = tol;
      handle->traj = tll::solve_ermakov_numeric(tll::coupling_omega_sq(s), p, v_f * std::fabs(p), gamma0,
                                                0.0, t, options);
    } else {
      tll::fail(tll::ErrorCode::domain, "tll_linear_ramp_solve: unknown method");
    }
    *out = handle.release();
  });
}

size_t tll_trajectory_size(const tll_trajectory* traj) { return traj ? traj->traj.size() : 0; }

tll_status tll_trajectory_sample(const tll_trajectory* traj, size_t index, double* t, double* gamma,
                                 double* gamma_dot, double* gamma_ddot) {
  if (!traj) return null_argument("traj");
  if (index >= traj->traj.size()) return record(TLL_E_DOMAIN, "sample index out of range");
  if (t) *t = traj->traj.times[index];
  if (gamma) *gamma = traj->traj.gamma[index];
  if (gamma_dot) *gamma_dot = traj->traj.gamma_dot[index];
  if (gamma_ddot) *gamma_ddot = traj->traj.gamma_ddot[index];
  return TLL_OK;
}

void tll_trajectory_free(tll_trajectory* traj) { delete traj; }

tll_status tll_config_default(tll_config** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new tll_config{}; });
}

tll_status tll_config_parse(const char* text, tll_config** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!text) return null_argument("text");
  return guarded([&] { *out = new tll_config{tll::parse_config(text)}; });
}

tll_status tll_config_load(const char* path, tll_config** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!path) return null_argument("path");
  return guarded([&] { *out = new tll_config{tll::load_config(path)}; });
}

tll_status tll_config_emit(const tll_config* config, char** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!config) return null_argument("config");
  return guarded([&] {
    const std::string text = tll::emit_config(config->config);
    char* buffer = new char[text.size() + 1];
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
  });
}

void tll_config_free(tll_config* config) { delete config; }
void tll_string_free(char* text) { delete[] text; }

size_t tll_preset_count(void) { return tll::preset_ids().size(); }

const char* tll_preset_id(size_t index) {
  static const std::vector<std::string> ids = tll::preset_ids();
  return index < ids.size() ? ids[index].c_str() : nullptr;
}

const char* tll_preset_description(const char* id) {
  if (!id) return nullptr;
  static thread_local std::string description;
  try {
    description = tll::preset_description(id);
  } catch (const tll::Error& e) {
    record(TLL_E_CONFIG, e.what());
    return nullptr;
  }
  return description.c_str();
}

void tll_run_options_init(tll_run_options* options) {
  if (!options) return;
  options->out_dir = nullptr;
  options->format = TLL_FORMAT_CONFIG;
  options->threads = 0;
  options->tol = 0.0;
  options->emit_trajectories = 0;
}

tll_status tll_run(const tll_config* config, const char* command, const tll_run_options* options,
                   tll_result** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!config) return null_argument("config");
  return guarded([&] {
    tll::RunConfig c = config->config;
    if (command) {
      c.command = command;
      tll::validate_config(c);
    }
    *out = new tll_result{tll::run_command(c, convert(options))};
  });
}

tll_status tll_run_figure(const char* id, const tll_run_options* options, tll_result** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!id) return null_argument("id");
  return guarded([&] { *out = new tll_result{tll::cmd_figure(id, convert(options))}; });
}

int tll_result_exit_code(const tll_result* result) {
  return result ? static_cast<int>(result->result.exit_code) : -1;
}

const char* tll_result_summary(const tll_result* result) {
  return result ? result->result.summary.c_str() : "";
}

size_t tll_result_file_count(const tll_result* result) { return result ? result->result.files.size() : 0; }

const char* tll_result_file(const tll_result* result, size_t index) {
  if (!result || index >= result->result.files.size()) return nullptr;
  return result->result.files[index].c_str();
}

void tll_result_free(tll_result* result) { delete result; }

}  // extern "C"
