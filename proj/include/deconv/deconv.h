#ifndef DECONV_DECONV_H
#define DECONV_DECONV_H

#include <stddef.h>
#include <stdint.h>

#if defined(DECONV_BUILDING_LIBRARY)
#define DCV_API __attribute__((visibility("default")))
#else
#define DCV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcv_status
{
  DCV_OK = 0,
  DCV_ERR_INVALID_ARGUMENT = 1,
  DCV_ERR_CONFIG = 2,
  DCV_ERR_NUMERICAL = 3,
  DCV_ERR_IO = 4
} dcv_status;

typedef struct dcv_samples dcv_samples;
typedef struct dcv_estimate dcv_estimate;

DCV_API const char* dcv_version(void);
//! Message of the last failed call on this thread, "" if none.
DCV_API const char* dcv_last_error(void);

//! Scenario given as the JSON object accepted under "scenario" in configs.
DCV_API dcv_status dcv_samples_simulate(const char* scenario_json, size_t n, uint64_t seed,
                                        dcv_samples** out);
//! Copies n rows of d1 + d2 doubles.
DCV_API dcv_status dcv_samples_from_array(int d1, int d2, const double* data, size_t n,
                                          dcv_samples** out);
DCV_API dcv_status dcv_samples_read_csv(const char* path, int d1, int d2, dcv_samples** out);
DCV_API dcv_status dcv_samples_write_csv(const dcv_samples* s, const char* path);
DCV_API size_t dcv_samples_count(const dcv_samples* s);
DCV_API int dcv_samples_dim(const dcv_samples* s);
//! Row-major, valid until the handle is freed.
DCV_API const double* dcv_samples_data(const dcv_samples* s);
DCV_API void dcv_samples_free(dcv_samples* s);

//! estimator_json: the "estimator" object of a config, NULL or "{}" for defaults.
DCV_API dcv_status dcv_estimate_run(const dcv_samples* s, const char* estimator_json,
                                    double kappa, uint64_t seed, dcv_estimate** out);
DCV_API double dcv_estimate_kappa(const dcv_estimate* e);
DCV_API double dcv_estimate_contrast(const dcv_estimate* e);
DCV_API int dcv_estimate_m(const dcv_estimate* e);
DCV_API double dcv_estimate_omega(const dcv_estimate* e);
DCV_API int dcv_estimate_dim(const dcv_estimate* e);
//! Fitted CF at t (dim entries).
DCV_API dcv_status dcv_estimate_cf_at(const dcv_estimate* e, const double* t, double* re,
                                      double* im);
//! Inverted density at x (dim entries).
DCV_API dcv_status dcv_estimate_density_at(const dcv_estimate* e, const double* x,
                                           double* value);
DCV_API void dcv_estimate_free(dcv_estimate* e);

//! One CLI subcommand with its JSON config text. `violations` may be NULL.
DCV_API dcv_status dcv_run_command(const char* name, const char* config_json,
                                   const char* out_dir, size_t* violations);
//! One-line summary of the last successful dcv_run_command on this thread.
DCV_API const char* dcv_last_message(void);

#ifdef __cplusplus
}
#endif

#endif
