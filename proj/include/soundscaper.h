/* Soundscape captioning pipeline: C interface.
 *
 * All functions return SSC_OK (0) on success; on failure they return a
 * status code and leave a one-line "Kind: message" description retrievable
 * through ssc_last_error() (thread-local). Strings returned through
 * `char**` out-parameters are owned by the caller and released with
 * ssc_string_free().
 */
#ifndef SOUNDSCAPER_H
#define SOUNDSCAPER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssc_status {
    SSC_OK = 0,
    SSC_ERR_PARSE = 1,       /* malformed file or value */
    SSC_ERR_VALIDATION = 2,  /* well-formed but unacceptable input */
    SSC_ERR_IO = 3,          /* filesystem or network failure */
    SSC_ERR_MISSING = 4,     /* absent artifact, file or cache entry */
    SSC_ERR_RANGE = 5,       /* numeric argument out of bounds */
    SSC_ERR_STATE = 6,       /* artifact/config mismatch or bad version */
    SSC_ERR_AUTH = 7,        /* credential missing or rejected */
    SSC_ERR_UNAVAILABLE = 8, /* provider rate limit or empty response */
    SSC_ERR_ARGUMENT = 9,    /* null pointer or malformed C argument */
    SSC_ERR_INTERNAL = 10
} ssc_status;

/* Last error on this thread, or an empty string. Valid until the next
 * failing call on the same thread. */
const char* ssc_last_error(void);
const char* ssc_version(void);
void ssc_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

typedef struct ssc_config ssc_config;

ssc_status ssc_config_create(ssc_config** out); /* built-in defaults */
ssc_status ssc_config_load(const char* path, ssc_config** out);
/* "dotted.key=value", e.g. "train.max_epochs=5" or "paths.output_dir=out" */
ssc_status ssc_config_override(ssc_config* cfg, const char* assignment);
ssc_status ssc_config_set_seed(ssc_config* cfg, uint64_t seed);
ssc_status ssc_config_hash(const ssc_config* cfg, uint64_t* out);
ssc_status ssc_config_dump(const ssc_config* cfg, char** json_out);
void ssc_config_destroy(ssc_config* cfg);

/* ---- pipeline stages -------------------------------------------------- */
/* Each stage writes its artifacts to the configured directories and, when
 * summary_out is non-null, returns a short status line. */

ssc_status ssc_make_fixture(const char* root, uint64_t seed,
                            char** summary_out);
ssc_status ssc_extract_features(const ssc_config* cfg, char** summary_out);
ssc_status ssc_pseudo_label(const ssc_config* cfg, char** summary_out);
ssc_status ssc_split(const ssc_config* cfg, size_t n_train, size_t n_val,
                     size_t n_test, char** summary_out);
ssc_status ssc_train(const ssc_config* cfg, char** summary_out);
ssc_status ssc_predict(const ssc_config* cfg, const char* split,
                       char** summary_out);
ssc_status ssc_caption(const ssc_config* cfg, const char* split, int force,
                       char** summary_out);
ssc_status ssc_score_captions(const ssc_config* cfg, const char* ratings_csv,
                              char** summary_out);
ssc_status ssc_analyze_correlations(const ssc_config* cfg, const char* split,
                                    char** summary_out);

/* ---- small pure helpers ----------------------------------------------- */

/* Circumplex projections of the eight quality responses (order: pleasant,
 * eventful, chaotic, vibrant, uneventful, calm, annoying, monotonous),
 * each in [1, 5]. */
ssc_status ssc_iso_pleasantness(const double aq[8], double* out);
ssc_status ssc_iso_eventfulness(const double aq[8], double* out);

/* Caption score (P + R) / 2 + F + C + I with range validation. */
ssc_status ssc_thumbs_score(double p, double r, double f, double c, double i,
                            double* out);

/* Trainable parameter count of the model built from the config. */
ssc_status ssc_model_param_count(const ssc_config* cfg, uint64_t* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SOUNDSCAPER_H */
