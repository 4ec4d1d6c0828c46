#ifndef TLLSTA_H
#define TLLSTA_H

/* C interface of the tllsta library. Every function returns a tll_status;
 * on failure tll_last_error() holds a message for the calling thread. Handles
 * are opaque and released with the matching *_free function (NULL is fine). */

#include <stddef.h>

#if defined(_WIN32)
#define TLL_API __declspec(dllexport)
#else
#define TLL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tll_status {
  TLL_OK = 0,
  TLL_E_DOMAIN = 1,
  TLL_E_INSTABILITY = 2,
  TLL_E_OVERFLOW = 3,
  TLL_E_SINGULARITY = 4,
  TLL_E_STIFFNESS = 5,
  TLL_E_ROOT_NOT_FOUND = 6,
  TLL_E_CONFIG = 7,
  TLL_E_INCOMPLETE_GRID = 8,
  TLL_E_LINEAR_DEPENDENCE = 9,
  TLL_E_DEGENERATE_PROTOCOL = 10,
  TLL_E_CONSISTENCY = 11,
  TLL_E_IO = 12,
  TLL_E_NULL_ARGUMENT = 100,
  TLL_E_INTERNAL = 101
} tll_status;

TLL_API const char* tll_version(void);
TLL_API const char* tll_status_string(tll_status status);

/* Message and numeric detail (NaN if none) of the last failure on this thread. */
TLL_API const char* tll_last_error(void);
TLL_API double tll_last_error_detail(void);

/* Special functions. out receives Ai, Ai', Bi, Bi'. */
TLL_API tll_status tll_airy(double z, double out[4]);
TLL_API tll_status tll_gamma0(double x, double* out);

/* Closed-form energies (hbar = 1). */
TLL_API tll_status tll_adiabatic_energy(double alpha, double v_f, double r0, double length, double* out);
TLL_API tll_status tll_sudden_energy(double alpha, double v_f, double r0, double length, double* out);
TLL_API tll_status tll_perturbative_residual_linear(double alpha, double tau_q, double v_f, double r0,
                                                   double length, double* out);
TLL_API tll_status tll_residual_inverse_poly(double b_coeff, double v_f, double r0, double length,
                                            double* out);

/* Single-mode Ermakov trajectory of the linear interaction ramp. */
typedef struct tll_trajectory tll_trajectory;

typedef enum tll_method { TLL_METHOD_NUMERIC = 0, TLL_METHOD_AIRY = 1 } tll_method;

/* tol is ignored for TLL_METHOD_AIRY; pass 0 for the default. */
TLL_API tll_status tll_linear_ramp_solve(double p, double alpha, double tau_q, double v_f, double gamma0,
                                        const double* times, size_t count, tll_method method, double tol,
                                        tll_trajectory** out);
TLL_API size_t tll_trajectory_size(const tll_trajectory* traj);
TLL_API tll_status tll_trajectory_sample(const tll_trajectory* traj, size_t index, double* t, double* gamma,
                                        double* gamma_dot, double* gamma_ddot);
TLL_API void tll_trajectory_free(tll_trajectory* traj);

/* Run configuration. */
typedef struct tll_config tll_config;

TLL_API tll_status tll_config_default(tll_config** out);
TLL_API tll_status tll_config_parse(const char* text, tll_config** out);
TLL_API tll_status tll_config_load(const char* path, tll_config** out);
/* Normalized text; release with tll_string_free. */
TLL_API tll_status tll_config_emit(const tll_config* config, char** out);
TLL_API void tll_config_free(tll_config* config);
TLL_API void tll_string_free(char* text);

/* Presets. Ids are static strings. */
TLL_API size_t tll_preset_count(void);
TLL_API const char* tll_preset_id(size_t index);
TLL_API const char* tll_preset_description(const char* id);

typedef enum tll_format { TLL_FORMAT_CONFIG = -1, TLL_FORMAT_CSV = 0, TLL_FORMAT_JSON = 1 } tll_format;

typedef struct tll_run_options {
  const char* out_dir;   /* NULL: the configured output path */
  tll_format format;     /* TLL_FORMAT_CONFIG keeps the configured format */
  int threads;           /* 0 keeps the configured count */
  double tol;            /* 0 keeps the configured tolerance */
  int emit_trajectories;
} tll_run_options;

TLL_API void tll_run_options_init(tll_run_options* options);

typedef struct tll_result tll_result;

/* command: "solve", "sweep", "sta-design", "accidental", or NULL for the
 * configured one. Numeric and stability failures are not errors at this
 * level: they are reported through tll_result_exit_code (3 and 4). */
TLL_API tll_status tll_run(const tll_config* config, const char* command, const tll_run_options* options,
                          tll_result** out);
TLL_API tll_status tll_run_figure(const char* id, const tll_run_options* options, tll_result** out);
TLL_API int tll_result_exit_code(const tll_result* result);
TLL_API const char* tll_result_summary(const tll_result* result);
TLL_API size_t tll_result_file_count(const tll_result* result);
TLL_API const char* tll_result_file(const tll_result* result, size_t index);
TLL_API void tll_result_free(tll_result* result);

#ifdef __cplusplus
}
#endif

#endif /* TLLSTA_H */
