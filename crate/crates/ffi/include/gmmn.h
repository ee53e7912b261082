/* C ABI for the gmmn library (generalized minimum Manhattan networks).
 *
 * All functions return a GMMN_STATUS_* code unless noted. On failure,
 * gmmn_last_error() returns a thread-local message valid until the
 * next call on the same thread. Handles are opaque; free them with the
 * matching *_free function. Strings returned through out-parameters
 * must be released with gmmn_string_free.
 */

#ifndef GMMN_H
#define GMMN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  GMMN_STATUS_OK = 0,
  GMMN_STATUS_INFEASIBLE = 1,
  GMMN_STATUS_PARSE = 2,
  GMMN_STATUS_CONFIG = 3,
  GMMN_STATUS_SELF_CHECK = 4,
  GMMN_STATUS_NULL_ARGUMENT = 5,
  GMMN_STATUS_PANIC = 6,
};

enum {
  GMMN_ALGORITHM_RECURSIVE_D = 0,
  GMMN_ALGORITHM_IMPROVED_2D = 1,
};

enum {
  GMMN_BACKEND_MST = 0,
  GMMN_BACKEND_EXACT_SMALL = 1,
};

typedef struct GmmnInstance GmmnInstance;
typedef struct GmmnNetwork GmmnNetwork;

const char *gmmn_last_error(void);

/* Instance files (the "gmmn instance v1" text format). */
int gmmn_instance_parse(const char *text, GmmnInstance **out);
int gmmn_instance_serialize(const GmmnInstance *inst, char **out);
int gmmn_instance_dim(const GmmnInstance *inst);        /* -1 on NULL */
int gmmn_instance_pair_count(const GmmnInstance *inst); /* -1 on NULL */

/* Generators. */
int gmmn_gen_random(int dim, int n_pairs, int64_t lo, int64_t hi,
                    uint64_t seed, GmmnInstance **out);
int gmmn_gen_tight(int k, int64_t eps_num, int64_t eps_den,
                   GmmnInstance **out, GmmnNetwork **cert_out);

/* Solving and checking. */
int gmmn_solve(const GmmnInstance *inst, int algorithm, int backend,
               int parallel, GmmnNetwork **out);
int gmmn_verify(const GmmnInstance *inst, const GmmnNetwork *net,
                int *violations);

/* Network files (the "gmmn network v1" text format) and length as an
 * exact rational string. */
int gmmn_network_length(const GmmnNetwork *net, char **out);
int gmmn_network_serialize(const GmmnNetwork *net, char **out);
int gmmn_network_parse(const char *text, GmmnNetwork **out);

void gmmn_instance_free(GmmnInstance *inst);
void gmmn_network_free(GmmnNetwork *net);
void gmmn_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* GMMN_H */
