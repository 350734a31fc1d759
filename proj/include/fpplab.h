/* fpplab — first-passage percolation simulation and verification laboratory.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these functions; every call returns an fpp_status
 * whose values line up with the CLI exit codes. On failure,
 * fpp_last_error() holds a thread-local message describing the cause.
 *
 * Strings returned through char** out-parameters are heap-allocated and
 * must be released with fpp_string_free().
 */
#ifndef FPPLAB_H
#define FPPLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpp_status {
    FPP_OK = 0,
    FPP_CHECK_FAILED = 1,  /* a verification suite reported violations */
    FPP_CONFIG_ERROR = 2,  /* bad usage, config keys, or argument domains */
    FPP_RUNTIME_ERROR = 3  /* I/O failures and runtime errors */
} fpp_status;

typedef struct fpp_dist fpp_dist;
typedef struct fpp_config fpp_config;

const char* fpp_version(void);

/* Thread-local message for the most recent failing call. */
const char* fpp_last_error(void);

void fpp_string_free(char* s);

/* ---- weight distributions -------------------------------------------- */

/* kind: "uniform" (no params), "exponential" [rate], "two_point" [a,b,p],
 * "bernoulli" [p0], "point_mass" [c], "piecewise" (table_path to a CSV of
 * rows "t,F(t)" with strictly increasing t). */
fpp_status fpp_dist_create(const char* kind, const double* params, size_t n_params,
                           const char* table_path, fpp_dist** out);
void fpp_dist_free(fpp_dist* dist);

fpp_status fpp_dist_cdf(const fpp_dist* dist, double t, double* out);
/* Right-continuous inverse inf{x : F(x) >= u}, u in [0,1). */
fpp_status fpp_dist_inverse_cdf(const fpp_dist* dist, double u, double* out);
/* 1 - ln F(t); fails when F(t) = 0. */
fpp_status fpp_dist_animal_weight(const fpp_dist* dist, double t, double* out);
fpp_status fpp_dist_atom_at_zero(const fpp_dist* dist, double* out);
/* *ok = 1 iff the atom at zero is below the bond-percolation threshold
 * bound for dimension dim (2..6). */
fpp_status fpp_dist_validate_subcritical(const fpp_dist* dist, int dim, int* ok);

/* Draws bit_depth fair bits from a deterministic stream seeded by `seed`
 * and pushes the dyadic uniform through the inverse CDF. *bits holds bit j
 * (1-based) at position (bit_depth - j). */
fpp_status fpp_dist_sample_weight(const fpp_dist* dist, uint64_t seed, uint32_t bit_depth,
                                  double* weight, uint64_t* bits);

/* Truncated dyadic expansion sum bits[j] 2^{-(j+1)}, bits[j] in {0,1}. */
fpp_status fpp_encode_uniform(const int* bits, size_t depth, double* out);

/* ---- configuration ---------------------------------------------------- */

/* Load a flat key = value config file (NULL or "" for pure defaults) and
 * apply "key=value" override strings on top. Unknown keys fail. */
fpp_status fpp_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                           fpp_config** out);
/* Full key = value echo of the resolved configuration. */
fpp_status fpp_config_echo(const fpp_config* cfg, char** text);
void fpp_config_free(fpp_config* cfg);

/* ---- runs -------------------------------------------------------------
 * Each writes its artifact files under out_dir (NULL: the config's `out`)
 * and returns a JSON summary. */

/* One seeded configuration snapshot plus a geodesic report for (0, x). */
fpp_status fpp_sample_run(const fpp_config* cfg, const char* out_dir, char** summary_json);

/* Monte Carlo campaign: run.json + replicas.csv + tails.csv + config echo. */
fpp_status fpp_campaign_run(const fpp_config* cfg, const char* out_dir, char** summary_json);

/* Re-profile a persisted campaign (path to its .run.json) on the current
 * lambda grid. */
fpp_status fpp_tails_run(const fpp_config* cfg, const char* record_json_path,
                         const char* out_dir, char** summary_json);

/* One campaign per size in the config's `sizes` list, along e1. */
fpp_status fpp_variance_scaling_run(const fpp_config* cfg, const char* out_dir,
                                    char** summary_json);

/* Greedy lattice animal growth statistics. */
fpp_status fpp_animals_run(const fpp_config* cfg, const char* out_dir, char** summary_json);

/* suite: "lemmas" or "entropy". `only` filters check names by substring
 * (NULL: all); inject_failure names a check to flip, for harness tests.
 * Returns FPP_CHECK_FAILED when any check fails; *n_failed receives the
 * count either way. */
fpp_status fpp_verify_run(const fpp_config* cfg, const char* suite, const char* only,
                          const char* inject_failure, const char* out_dir, char** report_json,
                          int* n_failed);

#ifdef __cplusplus
}
#endif

#endif /* FPPLAB_H */
