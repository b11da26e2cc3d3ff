// Exercises the shared-library C interface end to end: handle lifecycle,
// error mapping, and the pure helpers. Plain asserts keep this binary free
// of any C++ test framework so it doubles as a linkage check.
#include <assert.h>
#include <math.h>
#include <stdint.h>
#include <stdio.h>
#include <string.h>

#include "soundscaper.h"

static int failures = 0;

#define EXPECT(cond)                                                     \
    do {                                                                 \
        if (!(cond)) {                                                   \
            ++failures;                                                  \
            fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__,    \
                    #cond);                                              \
        }                                                                \
    } while (0)

int main(void) {
    EXPECT(strcmp(ssc_version(), "1.0.0") == 0);

    /* config lifecycle */
    ssc_config* cfg = NULL;
    EXPECT(ssc_config_create(&cfg) == SSC_OK);
    EXPECT(cfg != NULL);

    uint64_t h0 = 0, h1 = 0;
    EXPECT(ssc_config_hash(cfg, &h0) == SSC_OK);
    EXPECT(ssc_config_override(cfg, "train.max_epochs=3") == SSC_OK);
    EXPECT(ssc_config_hash(cfg, &h1) == SSC_OK);
    EXPECT(h0 != h1);

    EXPECT(ssc_config_override(cfg, "no.such.key=1") == SSC_ERR_VALIDATION);
    EXPECT(strlen(ssc_last_error()) > 0);
    EXPECT(ssc_config_override(NULL, "a=b") == SSC_ERR_ARGUMENT);

    char* dump = NULL;
    EXPECT(ssc_config_dump(cfg, &dump) == SSC_OK);
    EXPECT(dump != NULL && strstr(dump, "\"max_epochs\":3") != NULL);
    ssc_string_free(dump);

    EXPECT(ssc_config_set_seed(cfg, 42) == SSC_OK);

    /* missing file maps onto the parse/io family, not a crash */
    ssc_config* missing = NULL;
    EXPECT(ssc_config_load("/nonexistent/config.json", &missing) != SSC_OK);
    EXPECT(missing == NULL);

    /* circumplex helpers */
    double aq[8] = {3, 3, 3, 3, 3, 3, 3, 3};
    double out = -1;
    EXPECT(ssc_iso_pleasantness(aq, &out) == SSC_OK);
    EXPECT(fabs(out) < 1e-12);
    EXPECT(ssc_iso_eventfulness(aq, &out) == SSC_OK);
    EXPECT(fabs(out) < 1e-12);
    aq[0] = 9.0;
    EXPECT(ssc_iso_pleasantness(aq, &out) == SSC_ERR_RANGE);
    EXPECT(ssc_iso_pleasantness(NULL, &out) == SSC_ERR_ARGUMENT);

    /* caption score helper */
    EXPECT(ssc_thumbs_score(3.84, 3.93, -0.10, -0.14, -0.22, &out) == SSC_OK);
    EXPECT(fabs(out - 3.425) < 1e-12);
    EXPECT(ssc_thumbs_score(9, 3, 0, 0, 0, &out) == SSC_ERR_RANGE);

    /* reference model parameter count through the opaque config */
    uint64_t params = 0;
    EXPECT(ssc_model_param_count(cfg, &params) == SSC_OK);
    EXPECT(params == 2664040u);

    ssc_config_destroy(cfg);
    ssc_config_destroy(NULL); /* must be a no-op */

    if (failures == 0) printf("capi_tests: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
