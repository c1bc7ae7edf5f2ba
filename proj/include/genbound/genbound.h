#ifndef GENBOUND_H
#define GENBOUND_H

/*
 * C interface to the generalization-bound laboratory. A session wraps one
 * experiment configuration (JSON); run/sweep write deterministic CSV reports,
 * verify executes the invariant suite. All functions return a gb_status;
 * gb_last_error() describes the most recent failure on the session.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GB_API __declspec(dllexport)
#else
#define GB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gb_status {
    GB_OK = 0,
    GB_ERROR = 1,             /* unexpected failure */
    GB_CONFIG_ERROR = 2,      /* malformed or invalid configuration */
    GB_BUDGET_ERROR = 3,      /* enumeration budget exceeded */
    GB_INVARIANT_FAILURE = 4  /* verify found a violated invariant */
} gb_status;

typedef struct gb_session gb_session;

GB_API gb_session* gb_session_new(void);
GB_API void gb_session_free(gb_session* s);

/* Configuration. Loading replaces any previous configuration. */
GB_API int gb_load_config(gb_session* s, const char* json_text);
GB_API int gb_load_config_file(gb_session* s, const char* path);

/* Command-line style overrides, applied after loading. */
GB_API int gb_set_mode(gb_session* s, const char* mode);  /* "exact" | "mc" */
GB_API int gb_set_seed(gb_session* s, uint64_t seed);
GB_API int gb_set_budget(gb_session* s, uint64_t budget);
GB_API int gb_set_out(gb_session* s, const char* path);

/* Runs the configured experiment / sweep and writes the CSV report to the
 * configured output path. Byte-identical outputs for identical inputs. */
GB_API int gb_run(gb_session* s);
GB_API int gb_sweep(gb_session* s);

/* Runs the invariant suite; GB_OK only when every check passes. The itemized
 * report is available through gb_report(). */
GB_API int gb_verify(gb_session* s);

/* Text report of the last run/sweep/verify; owned by the session. */
GB_API const char* gb_report(const gb_session* s);
GB_API const char* gb_last_error(const gb_session* s);

GB_API const char* gb_version(void);

/* Closed-form helpers; NaN signals a domain error. */
GB_API double gb_bernstein_h(double x);
GB_API double gb_birthday_floor(int n, int d);
GB_API double gb_vc_bound_rhs(int d_vc, int n);

#ifdef __cplusplus
}
#endif

#endif /* GENBOUND_H */
