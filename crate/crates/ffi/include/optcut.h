/* C interface to the optcut cutpoint library.
 *
 * Handles are opaque; release each with its *_free function (NULL is
 * accepted). Functions returning OptcutStatus store a message for the
 * calling thread on failure, read with optcut_last_error(). Strings handed
 * to the caller are released with optcut_string_free(). */

#ifndef OPTCUT_H
#define OPTCUT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum OptcutStatus {
  OPTCUT_OK = 0,
  OPTCUT_NULL_POINTER = 1,
  OPTCUT_USAGE = 2,
  OPTCUT_DATA = 3,
  OPTCUT_NUMERIC = 4,
  OPTCUT_IO = 5,
  OPTCUT_INVALID_UTF8 = 6,
  OPTCUT_PANIC = 7
} OptcutStatus;

#define OPTCUT_DIRECTION_AUTO 0
#define OPTCUT_DIRECTION_GE 1
#define OPTCUT_DIRECTION_LE 2

typedef struct OptcutSample OptcutSample;
typedef struct OptcutResult OptcutResult;

const char *optcut_version(void);
char *optcut_last_error(void);
void optcut_string_free(char *s);

OptcutStatus optcut_sample_new(const double *x, const uint8_t *labels, size_t n, OptcutSample **out);
void optcut_sample_free(OptcutSample *sample);

OptcutStatus optcut_estimate(const OptcutSample *sample, int direction, const char *method,
                             const char *metric, uint64_t seed, OptcutResult **out);
void optcut_result_free(OptcutResult *result);
double optcut_result_cutpoint(const OptcutResult *result);
double optcut_result_metric_value(const OptcutResult *result);
double optcut_result_auc(const OptcutResult *result);
OptcutStatus optcut_result_counts(const OptcutResult *result, uint64_t *tp, uint64_t *fp, uint64_t *tn,
                                  uint64_t *fn_);
OptcutStatus optcut_result_to_json(const OptcutResult *result, char **out);

OptcutStatus optcut_bootstrap_summary_json(const OptcutSample *sample, int direction, const char *method,
                                           const char *metric, size_t boot_runs, uint64_t seed,
                                           size_t workers, char **out);

#ifdef __cplusplus
}
#endif

#endif
