/* otoclab — exact OTOC / locality-bound laboratory for long-range spin
 * lattices. C interface of the shared library: opaque run handles driven by
 * JSON configs, plus a few closed-form helpers. All functions are
 * thread-compatible (one handle per thread). */
#ifndef OTOCLAB_H
#define OTOCLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum otoclab_status {
  OTOCLAB_OK = 0,
  OTOCLAB_ERR_BOUND_VIOLATION = 1, /* a rigorous inequality failed its check */
  OTOCLAB_ERR_CONFIG = 2,
  OTOCLAB_ERR_IO = 3,
  OTOCLAB_ERR_INVALID_ARGUMENT = 4,
  OTOCLAB_ERR_RESOURCE_LIMIT = 5,
  OTOCLAB_ERR_INTERNAL = 6
} otoclab_status;

const char* otoclab_version(void);
const char* otoclab_status_name(otoclab_status status);

/* Opaque run context: a parsed config plus per-invocation options. */
typedef struct otoclab_run otoclab_run;

/* Create a run from config JSON text or from a file. On success *out owns the
 * handle; destroy it with otoclab_run_destroy. On failure *out receives a
 * handle carrying only the error message (still must be destroyed), unless
 * allocation itself failed and *out is NULL. */
otoclab_status otoclab_run_create(const char* config_json, otoclab_run** out);
otoclab_status otoclab_run_create_from_file(const char* path, otoclab_run** out);
void otoclab_run_destroy(otoclab_run* run);

/* Options: "seed" (uint64), "workers" (int), "out-dir" (path),
 * "sensitivity" ("0"/"1"), "test-mode" ("0"/"1"). */
otoclab_status otoclab_run_set_option(otoclab_run* run, const char* key, const char* value);

/* Executes a command (NULL or "" uses the config's experiment.command):
 * lattice-info | model-check | otoc | bound-check | cluster-audit | fit |
 * regression. Outputs and a manifest are written to the output directory. */
otoclab_status otoclab_run_execute(otoclab_run* run, const char* command);

/* Manifest JSON of the last successful execute (empty string before that).
 * The pointer is owned by the handle and valid until the next call on it. */
const char* otoclab_run_report_json(const otoclab_run* run);

/* Message of the last error on this handle (empty string if none). */
const char* otoclab_run_last_error(const otoclab_run* run);

/* Light-cone exponent (2a-2D)/(2a-D+1); requires alpha > dimension. */
otoclab_status otoclab_zeta(double alpha, int dimension, double* out);

/* Scrambling-time scaling n^(zeta/D) (unit prefactor). */
otoclab_status otoclab_scrambling_time(int n, double alpha, int dimension, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OTOCLAB_H */
