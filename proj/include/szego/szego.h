/* C interface to the Szego cocycle library.
 *
 * All objects are opaque handles created by *_new and released by *_free.
 * Every fallible call returns an szego_status; on failure a message is
 * available from szego_last_error() on the calling thread. Spectral parameters
 * are given as z_turns, meaning z = exp(2 pi i z_turns). Complex arrays are
 * interleaved (re0, im0, re1, im1, ...) and sized in complex elements.
 */
#ifndef SZEGO_H
#define SZEGO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SZEGO_API __declspec(dllexport)
#else
#  define SZEGO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes for the command runners. */
typedef enum szego_status {
  SZEGO_OK = 0,
  SZEGO_VERIFY_FAILED = 1,
  SZEGO_CONFIG_ERROR = 2,
  SZEGO_NUMERICAL_ERROR = 3,
  SZEGO_INVALID_ARGUMENT = 4
} szego_status;

typedef enum szego_method { SZEGO_METHOD_BIRKHOFF = 0, SZEGO_METHOD_PHASE_AVERAGE = 1 } szego_method;

typedef struct szego_generator szego_generator;
typedef struct szego_config szego_config;
typedef struct szego_report szego_report;

typedef struct szego_estimate {
  double gamma_hat;
  double bound;
  double margin;
  int64_t n;
  int64_t samples;
  szego_method method;
} szego_estimate;

typedef struct szego_subharmonic {
  int64_t n;
  double circle_average;
  double center_value;
  double slack;
} szego_subharmonic;

SZEGO_API const char* szego_version(void);
SZEGO_API const char* szego_last_error(void);

SZEGO_API szego_status szego_theorem1_bound(double epsilon, double* out);
SZEGO_API szego_status szego_lambda_max(double epsilon, const double* coeffs, size_t count,
                                        double* out);

/* Generators: f(theta, j) in the open unit disk. */
SZEGO_API szego_status szego_generator_new_exp(double epsilon, int k, szego_generator** out);
SZEGO_API szego_status szego_generator_new_perturbed(double epsilon, int k, double lambda_re,
                                                     double lambda_im, const double* coeffs,
                                                     size_t count, szego_generator** out);
SZEGO_API szego_status szego_generator_new_constant(double re, double im, szego_generator** out);
SZEGO_API void szego_generator_free(szego_generator* g);
SZEGO_API szego_status szego_generator_eval(const szego_generator* g, double theta, int j,
                                            double* re, double* im);

/* Estimators. alpha is the rotation number in (0, 1). */
SZEGO_API szego_status szego_estimate_birkhoff(const szego_generator* g, double alpha,
                                               double theta0, int j0, double z_turns, int64_t n,
                                               szego_estimate* out);
SZEGO_API szego_status szego_estimate_phase_average(const szego_generator* g, double alpha,
                                                    double z_turns, int64_t n, int grid,
                                                    szego_estimate* out);
/* Exponential-family generators only. */
SZEGO_API szego_status szego_subharmonic_check(const szego_generator* g, double alpha,
                                               double z_turns, int j0, int64_t n, int grid,
                                               szego_subharmonic* out);

/* Command configuration. Keys are the long CLI flag names without dashes. */
SZEGO_API szego_status szego_config_new(szego_config** out);
SZEGO_API void szego_config_free(szego_config* cfg);
SZEGO_API szego_status szego_config_set(szego_config* cfg, const char* key, const char* value);
SZEGO_API szego_status szego_config_load(szego_config* cfg, const char* path);

/* Runs bound | scan | verify-t1 | verify-t2 | subharmonic. The returned status
 * equals szego_report_status(*out); *out is set whenever a report was produced. */
SZEGO_API szego_status szego_run(const szego_config* cfg, const char* command,
                                 szego_report** out);
SZEGO_API szego_status szego_report_status(const szego_report* r);
SZEGO_API const char* szego_report_output(const szego_report* r);
SZEGO_API const char* szego_report_diagnostics(const szego_report* r);
SZEGO_API void szego_report_free(szego_report* r);

#ifdef __cplusplus
}
#endif

#endif /* SZEGO_H */
