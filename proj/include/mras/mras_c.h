#ifndef MRAS_C_H
#define MRAS_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(MRAS_BUILDING_LIBRARY)
#define MRAS_API __attribute__((visibility("default")))
#else
#define MRAS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mras_experiment mras_experiment;

typedef enum mras_status {
  MRAS_OK = 0,
  MRAS_ERR_CONFIG = 1,
  MRAS_ERR_BLOWUP = 2,
  MRAS_ERR_VERIFICATION = 3,
  MRAS_ERR_IO = 4,
  MRAS_ERR_DOMAIN = 5,
  MRAS_ERR_INVALID_ARGUMENT = 6,
  MRAS_ERR_INTERNAL = 7
} mras_status;

/* Message of the last failing call on this thread ("" if none). */
MRAS_API const char* mras_last_error(void);
MRAS_API const char* mras_version(void);
MRAS_API const char* mras_status_name(mras_status status);

MRAS_API mras_status mras_experiment_load(const char* path, mras_experiment** out);
MRAS_API mras_status mras_experiment_from_json(const char* json, mras_experiment** out);
MRAS_API void mras_experiment_destroy(mras_experiment* exp);

MRAS_API mras_status mras_experiment_set_output_dir(mras_experiment* exp, const char* dir);
MRAS_API mras_status mras_experiment_set_seed(mras_experiment* exp, uint64_t seed);
/* Canonical configuration; owned by the handle, valid until the next call on it. */
MRAS_API const char* mras_experiment_config_json(mras_experiment* exp);

/* Data conditions and maximum principle. *all_passed may be NULL. */
MRAS_API mras_status mras_experiment_validate(mras_experiment* exp, int* all_passed);
/* Full pipeline with artifacts written to the output directory. */
MRAS_API mras_status mras_experiment_run(mras_experiment* exp);
/* axis: "delta", "sp_width", "ti_window", "n" or "dt". */
MRAS_API mras_status mras_experiment_scan(mras_experiment* exp, const char* axis,
                                          const double* values, size_t count);

/* Results of the last validate/run/scan. Strings are owned by the handle. */
MRAS_API mras_status mras_experiment_check_counts(const mras_experiment* exp, size_t* passed,
                                                  size_t* failed);
MRAS_API mras_status mras_experiment_rate(const mras_experiment* exp, double* omega_hat,
                                          double* r_squared, double* omega_pred);
MRAS_API mras_status mras_experiment_energy(const mras_experiment* exp, double* initial,
                                            double* final_value, double* plateau);
MRAS_API const char* mras_experiment_report_text(const mras_experiment* exp);
MRAS_API const char* mras_experiment_report_json(const mras_experiment* exp);
MRAS_API const char* mras_experiment_scan_csv(const mras_experiment* exp);

#ifdef __cplusplus
}
#endif

#endif
