/* C interface to the kirigami bistable-composite toolkit.
 *
 * Usage pattern:
 *   kiri_config* cfg = NULL;
 *   if (kiri_config_parse(json_text, &cfg) != KIRI_OK) { ... kiri_last_error() ... }
 *   kiri_config_set(cfg, "prestretch=1.8");
 *   kiri_run_analyze(cfg, "out_dir", &summary);   // summary freed by kiri_string_free
 *   kiri_config_free(cfg);
 *
 * All functions return a kiri_status; on failure kiri_last_error() holds a
 * human-readable message for the calling thread until the next API call.
 */
#ifndef KIRIGAMI_H
#define KIRIGAMI_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kiri_status {
    KIRI_OK = 0,
    KIRI_ERR_VALIDATION = 1, /* bad config / bad arguments */
    KIRI_ERR_SOLVER = 2,     /* no equilibrium converged */
    KIRI_ERR_IO = 3,         /* file read/write failure */
    KIRI_ERR_DOMAIN = 4,     /* math domain violation (e.g. lambda < 1) */
    KIRI_ERR_INFEASIBLE = 5  /* inverse-design target out of range */
} kiri_status;

typedef struct kiri_config kiri_config; /* opaque */

/* Library semantic version, static storage. */
const char* kiri_version(void);

/* Message for the last failing call on this thread; static storage, valid
 * until the next library call from the same thread. Empty string if none. */
const char* kiri_last_error(void);

/* ---- config ------------------------------------------------------------ */

/* Parse a JSON config document (any subset of keys; defaults fill the rest). */
kiri_status kiri_config_parse(const char* json_text, kiri_config** out);

/* Load a JSON config from a file path. */
kiri_status kiri_config_load(const char* path, kiri_config** out);

/* Apply one "dotted.path=value" override. */
kiri_status kiri_config_set(kiri_config* cfg, const char* assignment);

/* Serialize the effective config as pretty JSON; free with kiri_string_free. */
kiri_status kiri_config_dump(const kiri_config* cfg, char** out_json);

void kiri_config_free(kiri_config* cfg);
void kiri_string_free(char* s);

/* ---- closed-form evaluators --------------------------------------------- */

/* Cauchy stress (kPa) of an incompressible Mooney-Rivlin solid under
 * equibiaxial stretch lambda. */
kiri_status kiri_cauchy_stress(double c1_kpa, double c2_kpa, double lambda, double* out_kpa);

/* Spontaneous curvature (1/mm): sqrt(c_s/d_eq) * eps/(1+eps), eps = lambda-1.
 * c_s in kPa*mm, d_eq in kPa*mm^3. */
kiri_status kiri_curvature(double c_s, double d_eq, double lambda, double* out_per_mm);

/* Normalized height H/L for the configured stack/pattern at the config's
 * prestretch; shape_law 0 = pyramid, 1 = spherical cap. */
kiri_status kiri_height_ratio(const kiri_config* cfg, int shape_law, double* out);

/* ---- runners ------------------------------------------------------------ */
/* Each writes its artifacts under out_dir (created if needed) and returns a
 * short text summary in *out_summary (free with kiri_string_free; pass NULL
 * to skip). */

kiri_status kiri_run_analyze(const kiri_config* cfg, const char* out_dir, char** out_summary);
kiri_status kiri_run_sweep(const kiri_config* cfg, const char* out_dir, char** out_summary);
kiri_status kiri_run_design(const kiri_config* cfg, const char* out_dir, char** out_summary);
kiri_status kiri_run_simulate(const kiri_config* cfg, const char* out_dir, char** out_summary);
kiri_status kiri_run_snap(const kiri_config* cfg, const char* out_dir, char** out_summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KIRIGAMI_H */
