/* C interface to the coin-tossing workbench.  Everything crosses this
 * boundary as opaque handles and JSON text; no C++ types leak through.
 *
 * Usage pattern:
 *
 *     bpkcnm_config* cfg = bpkcnm_config_new();
 *     bpkcnm_config_set_int(cfg, "seed", 42);
 *     bpkcnm_result* res = NULL;
 *     if (bpkcnm_run(cfg, &res) == BPKCNM_OK) {
 *         puts(bpkcnm_result_json(res));
 *         bpkcnm_result_destroy(res);
 *     } else {
 *         fputs(bpkcnm_last_error(), stderr);
 *     }
 *     bpkcnm_config_destroy(cfg);
 */
#ifndef BPKCNM_H
#define BPKCNM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every entry point. */
#define BPKCNM_OK 0
#define BPKCNM_ERR_CONFIG (-1)   /* bad key, value, or combination */
#define BPKCNM_ERR_PROTOCOL (-2) /* malformed input or broken wire contract */
#define BPKCNM_ERR_INTERNAL (-3) /* invariant violation inside the library */

typedef struct bpkcnm_config bpkcnm_config;
typedef struct bpkcnm_result bpkcnm_result;

/* Configs start at the library defaults. */
bpkcnm_config* bpkcnm_config_new(void);
void bpkcnm_config_destroy(bpkcnm_config* cfg);

/* Integer keys: n, s, seed, prf_input_len, action_budget, rewind_cap_factor.
 * String keys: group (toy|large), backend (ideal|sigma), prg, crs
 * (identity|prg-seed), adversary, adversary_script, aux.  Unknown keys and
 * out-of-range values return BPKCNM_ERR_CONFIG. */
int bpkcnm_config_set_int(bpkcnm_config* cfg, const char* key, long long value);
int bpkcnm_config_set_str(bpkcnm_config* cfg, const char* key, const char* value);

/* Pipelines.  On BPKCNM_OK, *out receives a result owning a JSON artifact;
 * free it with bpkcnm_result_destroy.  On any error, *out is untouched and
 * bpkcnm_last_error() describes the failure. */
int bpkcnm_run(const bpkcnm_config* cfg, bpkcnm_result** out);
int bpkcnm_simulate(const bpkcnm_config* cfg, bpkcnm_result** out);
int bpkcnm_attack(const bpkcnm_config* cfg, bpkcnm_result** out);
int bpkcnm_probe_ski(const bpkcnm_config* cfg, const char* relation, size_t trials,
                     bpkcnm_result** out);
int bpkcnm_classify(const char* artifact_json, bpkcnm_result** out);
int bpkcnm_selftest(bpkcnm_result** out);

/* The JSON text lives as long as the result handle. */
const char* bpkcnm_result_json(const bpkcnm_result* res);
int bpkcnm_result_status(const bpkcnm_result* res);
void bpkcnm_result_destroy(bpkcnm_result* res);

/* Text of the most recent failure on the calling thread; never NULL. */
const char* bpkcnm_last_error(void);
const char* bpkcnm_version(void);

#ifdef __cplusplus
}
#endif

#endif /* BPKCNM_H */
