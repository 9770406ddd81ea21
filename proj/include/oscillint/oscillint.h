#ifndef OSCILLINT_OSCILLINT_H
#define OSCILLINT_OSCILLINT_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#if defined(OSCILLINT_BUILDING)
#define OSCILLINT_API __declspec(dllexport)
#else
#define OSCILLINT_API __declspec(dllimport)
#endif
#else
#define OSCILLINT_API __attribute__((visibility("default")))
#endif

typedef enum oscillint_status {
  OSCILLINT_OK = 0,
  OSCILLINT_E_INVALID_ARGUMENT = 1,
  OSCILLINT_E_BREAKPOINT = 2,
  OSCILLINT_E_DOMAIN = 3,
  OSCILLINT_E_QUADRATURE = 4,
  OSCILLINT_E_SOLVER = 5,
  OSCILLINT_E_BVP_NOT_SOLVABLE = 6,
  OSCILLINT_E_SCHEMA = 7,
  OSCILLINT_E_IO = 8,
  OSCILLINT_E_INTERNAL = 99
} oscillint_status;

/* Parsed, validated problem file. */
typedef struct oscillint_problem oscillint_problem;
/* Output of one command. */
typedef struct oscillint_result oscillint_result;

OSCILLINT_API const char* oscillint_version(void);
OSCILLINT_API const char* oscillint_status_string(oscillint_status status);

/* Message of the last failed call on this thread; "" if none. */
OSCILLINT_API const char* oscillint_last_error(void);

OSCILLINT_API oscillint_status oscillint_problem_load(const char* path, oscillint_problem** out);
OSCILLINT_API oscillint_status oscillint_problem_parse(const char* json_text, oscillint_problem** out);
OSCILLINT_API void oscillint_problem_free(oscillint_problem* problem);

/* Canonical JSON of the problem; parsing it gives an equal problem. The
   string is owned by the problem and valid until the next call on it. */
OSCILLINT_API oscillint_status oscillint_problem_serialize(oscillint_problem* problem, const char** json_text);

/* Overrides for the simulate section. NaN keeps the current value (or the
   default when the file has no simulate section). */
OSCILLINT_API oscillint_status oscillint_problem_set_simulate(oscillint_problem* problem, double x0, double v0,
                                                              double T, double dt);

/* Replaces the sweep axis. `param` must be declared in the file's params. */
OSCILLINT_API oscillint_status oscillint_problem_set_sweep(oscillint_problem* problem, const char* param,
                                                           double from, double to, int steps);

/* Runs certify, floquet, simulate, oracle or sweep. */
OSCILLINT_API oscillint_status oscillint_run(const oscillint_problem* problem, const char* command,
                                             oscillint_result** out);

/* Primary output: JSON for certify/floquet/oracle, CSV for simulate/sweep. */
OSCILLINT_API const char* oscillint_result_output(const oscillint_result* result);
/* Zero list JSON for simulate, "" otherwise. */
OSCILLINT_API const char* oscillint_result_zeros(const oscillint_result* result);
/* 0 on completion, 2 when certify found every criterion inapplicable. */
OSCILLINT_API int oscillint_result_exit_code(const oscillint_result* result);
OSCILLINT_API void oscillint_result_free(oscillint_result* result);

#ifdef __cplusplus
}
#endif

#endif
