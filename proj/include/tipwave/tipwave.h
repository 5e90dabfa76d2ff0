#ifndef TIPWAVE_TIPWAVE_H
#define TIPWAVE_TIPWAVE_H

/* C interface of libtipwave. All handles are opaque; every fallible call
 * returns a tw_status and leaves a message for tw_last_error() on the
 * calling thread. Strings returned by accessors stay valid until the
 * owning handle is freed. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(TIPWAVE_BUILDING)
#    define TW_API __declspec(dllexport)
#  else
#    define TW_API __declspec(dllimport)
#  endif
#else
#  define TW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tw_status {
  TW_OK = 0,
  TW_ERR_CONFIG = 1,
  TW_ERR_BLOW_UP = 2,
  TW_ERR_THRESHOLD = 3,
  TW_ERR_IO = 4,
  TW_ERR_PARAMETER = 5,
  TW_ERR_STRUCTURAL = 6,
  TW_ERR_HYPOTHESIS = 7,
  TW_ERR_NUMERICAL = 8,
  TW_ERR_INTERNAL = 9,
  TW_ERR_ARGUMENT = 10
} tw_status;

typedef struct tw_config tw_config;
typedef struct tw_report tw_report;
typedef struct tw_spectrum tw_spectrum;

TW_API const char* tw_version(void);

/* Message of the last failed call on this thread ("" if none). Config
 * errors list one violation per line. */
TW_API const char* tw_last_error(void);
TW_API const char* tw_status_name(tw_status status);

/* -- configuration -------------------------------------------------------- */

/* overrides: n_overrides strings of the form "key=value", may be NULL. */
TW_API tw_status tw_config_parse(const char* text, const char* const* overrides,
                                 size_t n_overrides, tw_config** out);
TW_API tw_status tw_config_load(const char* path, const char* const* overrides,
                                size_t n_overrides, tw_config** out);
TW_API void tw_config_free(tw_config* config);

TW_API size_t tw_config_warning_count(const tw_config* config);
TW_API const char* tw_config_warning(const tw_config* config, size_t index);
/* Canonical key = value text; parses back to an equal config. */
TW_API const char* tw_config_serialize(const tw_config* config);
TW_API const char* tw_config_mode(const tw_config* config);
TW_API const char* tw_config_out_dir(const tw_config* config);

/* -- runs ------------------------------------------------------------------- */

/* out_dir NULL uses the config's own out_dir; "" writes nothing. A failed
 * threshold is not an error: check tw_report_thresholds_passed. */
TW_API tw_status tw_run(const tw_config* config, const char* out_dir, tw_report** out);

/* Re-fits the energy traces of a finished run directory. */
TW_API tw_status tw_report_from_dir(const char* dir, tw_report** out);
TW_API void tw_report_free(tw_report* report);

TW_API const char* tw_report_summary(const tw_report* report);
TW_API int tw_report_has_thresholds(const tw_report* report);
TW_API int tw_report_thresholds_passed(const tw_report* report);
/* Returns 1 and stores the value when an abscissa was computed. */
TW_API int tw_report_abscissa(const tw_report* report, double* value);
TW_API size_t tw_report_warning_count(const tw_report* report);
TW_API const char* tw_report_warning(const tw_report* report, size_t index);

/* Final value of a named energy trace ("plant", "v", ...). */
TW_API tw_status tw_report_energy(const tw_report* report, const char* name,
                                  double* initial, double* final_value);

/* -- spectra ---------------------------------------------------------------- */

/* family: "A2", "A" or "Abb". Uses the config's parameters only. */
TW_API tw_status tw_spectrum_compute(const tw_config* config, const char* family,
                                     int n_max, tw_spectrum** out);
TW_API void tw_spectrum_free(tw_spectrum* spectrum);

TW_API size_t tw_spectrum_size(const tw_spectrum* spectrum);
TW_API tw_status tw_spectrum_eigenvalue(const tw_spectrum* spectrum, size_t index,
                                        int* n, double* re, double* im,
                                        double* residual);
TW_API tw_status tw_spectrum_abscissa(const tw_spectrum* spectrum, double* value);
/* CSV with header n,seed_re,seed_im,refined_re,refined_im,residual. */
TW_API const char* tw_spectrum_csv(const tw_spectrum* spectrum);

#ifdef __cplusplus
}
#endif

#endif
