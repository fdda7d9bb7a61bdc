/* C API of the vaceuler shared library: opaque handles, integer status codes.
 * Every entry point catches internally; vc_last_error() returns the message of
 * the most recent failure on the calling thread. */
#ifndef VACEULER_H
#define VACEULER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vc_status {
    VC_OK = 0,
    VC_ERR_CONFIG = 1,  /* config parse or validation failure */
    VC_ERR_HEALTH = 2,  /* run terminated by a runtime health check */
    VC_ERR_INVALID = 3, /* bad arguments or handle misuse */
    VC_ERR_IO = 4,      /* filesystem failure */
    VC_ERR_INTERNAL = 5
} vc_status;

typedef struct vc_config vc_config;
typedef struct vc_run vc_run;

const char* vc_version(void);
/* thread-local message of the last failed call ("" if none) */
const char* vc_last_error(void);

vc_status vc_config_load(const char* path, vc_config** out);
vc_status vc_config_parse(const char* text, vc_config** out);
/* applies one key=value override (same keys as the config file) */
vc_status vc_config_set(vc_config* cfg, const char* key, const char* value);
void vc_config_free(vc_config* cfg);

/* Runs the simulation and writes <out_dir>/<prefix>_series.csv plus
 * <prefix>_summary.json. Returns VC_OK on clean completion or VC_ERR_HEALTH
 * when a health check stopped the run early; the partial trajectory is still
 * written and a run handle is still produced in both cases. */
vc_status vc_simulate(const vc_config* cfg, const char* out_dir, vc_run** out);

size_t vc_run_rows(const vc_run* run);
int vc_run_clean(const vc_run* run); /* 1 = reached T_final */
vc_status vc_run_termination(const vc_run* run, char* buf, size_t buflen);
vc_status vc_run_csv_path(const vc_run* run, char* buf, size_t buflen);
void vc_run_free(vc_run* run);

/* suite: "identities" | "norms" | "estimates". Writes a JSON report when
 * report_path is non-NULL; *all_passed (optional) is set 1/0. Unknown suite
 * names return VC_ERR_CONFIG. */
vc_status vc_check(const char* suite, uint64_t seed, const char* report_path,
                   int* all_passed);

/* Renders the SVG plots for a series CSV into out_dir. n_written and
 * bound_violated may be NULL. */
vc_status vc_plot(const char* csv_path, const char* out_dir, int* n_written,
                  int* bound_violated);

#ifdef __cplusplus
}
#endif

#endif /* VACEULER_H */
