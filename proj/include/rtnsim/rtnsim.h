/* rtnsim — spin-flip gate fidelity under random telegraph noise.
 *
 * C surface of the shared library. Create a run from a JSON config, execute
 * it, then read the result tables or write them out as CSV plus a JSON
 * sidecar. Every fallible call returns a status code; the message for the
 * most recent failure on the calling thread is available from
 * rtnsim_last_error().
 */
#ifndef RTNSIM_H
#define RTNSIM_H

#include <stdint.h>

#if defined(_WIN32)
#define RTNSIM_API __declspec(dllexport)
#else
#define RTNSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  RTNSIM_OK = 0,
  RTNSIM_ERR_INVALID_ARGUMENT = 1,
  RTNSIM_ERR_PARSE = 2,      /* config violation; message names the key path */
  RTNSIM_ERR_OVERFLOW = 3,   /* disentangling chart left its guard range */
  RTNSIM_ERR_NONFINITE = 4,
  RTNSIM_ERR_NO_OPTIMUM = 5,
  RTNSIM_ERR_DIVERGED = 6,   /* cross-checked propagators disagree */
  RTNSIM_ERR_IO = 7,
  RTNSIM_ERR_INTERNAL = 8
};

/* Opaque experiment handle. Not thread-safe; use one handle per thread. */
typedef struct rtnsim_run rtnsim_run;

RTNSIM_API void rtnsim_version(int* major, int* minor, int* patch);
RTNSIM_API const char* rtnsim_status_name(int status);
RTNSIM_API const char* rtnsim_last_error(void);

/* Parses and validates the JSON config. On success *out_run owns the run. */
RTNSIM_API int rtnsim_run_create(const char* config_json, rtnsim_run** out_run);
RTNSIM_API void rtnsim_run_destroy(rtnsim_run* run);

/* Overrides, applied before execute. Threads <= 0 means available
 * parallelism; thread count never changes the computed bytes. */
RTNSIM_API int rtnsim_run_set_seed(rtnsim_run* run, uint64_t master_seed);
RTNSIM_API int rtnsim_run_set_threads(rtnsim_run* run, int n_threads);

RTNSIM_API int rtnsim_run_execute(rtnsim_run* run);

/* 1 when the executed experiment passed its own acceptance (only the
 * validate-unitarity experiment can fail while still returning RTNSIM_OK). */
RTNSIM_API int rtnsim_run_passed(const rtnsim_run* run, int* out_passed);

/* Result tables. A sweep yields one table; a sequence scan yields one time
 * table per sequence plus one tau table per extracted optimum. */
RTNSIM_API int rtnsim_run_table_count(const rtnsim_run* run, int* out_count);
RTNSIM_API const char* rtnsim_run_table_name(const rtnsim_run* run, int table);
RTNSIM_API int rtnsim_run_row_count(const rtnsim_run* run, int table,
                                    int* out_count);
RTNSIM_API int rtnsim_run_row(const rtnsim_run* run, int table, int row,
                              double* out_abscissa, double* out_value,
                              double* out_stderr);

/* Resolved config and post-execute summary as JSON text; pointers stay valid
 * until the next call on the same handle or rtnsim_run_destroy. */
RTNSIM_API const char* rtnsim_run_config_json(const rtnsim_run* run);
RTNSIM_API const char* rtnsim_run_summary_json(const rtnsim_run* run);

/* Writes <table>.csv per table plus the <experiment>.json sidecar. */
RTNSIM_API int rtnsim_run_write_outputs(rtnsim_run* run, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* RTNSIM_H */
