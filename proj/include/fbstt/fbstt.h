/*
 * fbstt: UUV helix-tracking simulator with fuzzy-refined backstepping and
 * sliding-mode cascade control.
 *
 * Plain C interface over the C++ core. Objects are opaque handles created by
 * the *_load / *_parse / *_default / *_execute functions and released with the
 * matching *_free. Every fallible call returns an fbstt_status; on failure a
 * human-readable message is available from fbstt_last_error() on the same
 * thread until the next failing call.
 *
 * Handles are not internally synchronized. Distinct handles may be used from
 * different threads concurrently.
 */
#ifndef FBSTT_FBSTT_H
#define FBSTT_FBSTT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FBSTT_BUILDING_LIBRARY)
#    define FBSTT_API __declspec(dllexport)
#  else
#    define FBSTT_API __declspec(dllimport)
#  endif
#else
#  define FBSTT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fbstt_status {
  FBSTT_OK = 0,
  FBSTT_E_INVALID_ARGUMENT = 1, /* null pointer, bad enum, too few repetitions */
  FBSTT_E_IO = 2,               /* missing file, unwritable directory */
  FBSTT_E_SYNTAX = 3,           /* malformed YAML/JSON */
  FBSTT_E_CONFIG = 4,           /* unknown key or constraint violation */
  FBSTT_E_DIVERGED = 5,         /* state magnitude exceeded 1e6 */
  FBSTT_E_RANGE = 6,            /* index out of range, buffer too small */
  FBSTT_E_INTERNAL = 99
} fbstt_status;

typedef enum fbstt_mode {
  FBSTT_MODE_FBSTT = 0, /* fuzzy-refined backstepping + SMC */
  FBSTT_MODE_BSTT = 1   /* raw-error backstepping + SMC */
} fbstt_mode;

typedef struct fbstt_scenario fbstt_scenario;
typedef struct fbstt_run fbstt_run;

/* One control cycle; vectors ordered x/u, y/v, z/w, psi/r. */
typedef struct fbstt_record {
  double t;
  double pose[4];
  double pose_d[4];
  double error[4];
  double velocity[4];
  double control_velocity[4];
  double tau_demand[4];
  double t_bar[5]; /* normalized thruster demand before clamping */
  int saturated[5];
  double tau_bar_realized[4];
  double refined_error[4]; /* v_e fed to the backstepping law */
  double measured_error[4];
} fbstt_record;

typedef struct fbstt_summary {
  size_t records;
  double max_abs_vc[4];
  double max_abs_t_bar[5];
  double peak_t_bar[5]; /* signed value at the maximum magnitude */
  size_t saturated_steps;
  double final_window_start;
  double final_mean_position_error;
  double final_max_position_error;
  double final_mean_abs_error[4];
  double final_max_abs_error[4];
} fbstt_summary;

typedef struct fbstt_bench_report {
  int repetitions;
  double fbstt_median_s;
  double bstt_median_s;
  double ratio; /* fbstt / bstt */
} fbstt_bench_report;

FBSTT_API const char* fbstt_version(void);
FBSTT_API const char* fbstt_status_string(fbstt_status status);
FBSTT_API const char* fbstt_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

FBSTT_API fbstt_status fbstt_scenario_default(fbstt_scenario** out);
FBSTT_API fbstt_status fbstt_scenario_load(const char* path, fbstt_scenario** out);
/* YAML text, or JSON when the first non-blank character is '{'. */
FBSTT_API fbstt_status fbstt_scenario_parse(const char* text, fbstt_scenario** out);
FBSTT_API fbstt_status fbstt_scenario_clone(const fbstt_scenario* src, fbstt_scenario** out);
FBSTT_API void fbstt_scenario_free(fbstt_scenario* scenario);

/* Overrides are validated; a rejected value leaves the scenario unchanged. */
FBSTT_API fbstt_status fbstt_scenario_set_mode(fbstt_scenario* scenario, fbstt_mode mode);
FBSTT_API fbstt_status fbstt_scenario_set_seed(fbstt_scenario* scenario, uint64_t seed);
FBSTT_API fbstt_status fbstt_scenario_set_duration(fbstt_scenario* scenario, double seconds);
FBSTT_API fbstt_status fbstt_scenario_set_dt(fbstt_scenario* scenario, double seconds);
FBSTT_API fbstt_status fbstt_scenario_set_noise(fbstt_scenario* scenario, double amplitude);

/* Generic override by dotted key path, e.g. ("smc.lambda", "0.75") or
 * ("kinematic.v_max", "[1, 1, 0.5, 0.1]"). Unknown keys give FBSTT_E_CONFIG. */
FBSTT_API fbstt_status fbstt_scenario_set_value(fbstt_scenario* scenario, const char* key, const char* value);

FBSTT_API fbstt_status fbstt_scenario_get_mode(const fbstt_scenario* scenario, fbstt_mode* mode);
FBSTT_API fbstt_status fbstt_scenario_get_seed(const fbstt_scenario* scenario, uint64_t* seed);
FBSTT_API fbstt_status fbstt_scenario_step_count(const fbstt_scenario* scenario, size_t* steps);

/* Writes a NUL-terminated string into buf. *needed (optional) receives the
 * required size including the terminator; FBSTT_E_RANGE if len is too small. */
FBSTT_API fbstt_status fbstt_scenario_name(const fbstt_scenario* scenario, char* buf, size_t len, size_t* needed);
FBSTT_API fbstt_status fbstt_scenario_to_json(const fbstt_scenario* scenario, char* buf, size_t len, size_t* needed);
/* 16 hex digits + NUL. */
FBSTT_API fbstt_status fbstt_scenario_checksum(const fbstt_scenario* scenario, char* buf, size_t len);

/* ---- runs --------------------------------------------------------------- */

/* In-memory run. On divergence returns FBSTT_E_DIVERGED and still hands back
 * the partial run in *out. */
FBSTT_API fbstt_status fbstt_run_execute(const fbstt_scenario* scenario, fbstt_run** out);
/* As fbstt_run_execute, then writes trace.csv, summary.csv, scenario.json and
 * manifest.json into out_dir (created if missing). out may be NULL. */
FBSTT_API fbstt_status fbstt_run_to_directory(const fbstt_scenario* scenario, const char* out_dir, fbstt_run** out);
FBSTT_API void fbstt_run_free(fbstt_run* run);

FBSTT_API size_t fbstt_run_record_count(const fbstt_run* run);
FBSTT_API fbstt_status fbstt_run_record(const fbstt_run* run, size_t index, fbstt_record* out);
FBSTT_API fbstt_status fbstt_run_summary(const fbstt_run* run, fbstt_summary* out);
/* Returns 1 and stores the divergence time if the run diverged, else 0. */
FBSTT_API int fbstt_run_diverged(const fbstt_run* run, double* at);

/* ---- benchmark ---------------------------------------------------------- */

/* Median wall time of complete runs of each scenario; repetitions >= 3. */
FBSTT_API fbstt_status fbstt_benchmark(const fbstt_scenario* fbstt, const fbstt_scenario* bstt, int repetitions,
                                       fbstt_bench_report* out);

#ifdef __cplusplus
}
#endif

#endif /* FBSTT_FBSTT_H */
