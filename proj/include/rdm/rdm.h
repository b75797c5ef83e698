#ifndef RDM_RDM_H
#define RDM_RDM_H

/*
 * C interface of the rdm library.
 *
 * Handles are opaque and owned by the caller. Every function that can fail
 * returns an rdm_status; on failure rdm_last_error() describes the problem
 * (per thread, valid until the next call on that thread). Strings returned
 * through char** are heap-allocated and released with rdm_string_free().
 * Results are JSON documents.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(RDM_BUILDING_LIBRARY)
#define RDM_API __attribute__((visibility("default")))
#else
#define RDM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rdm_query rdm_query;
typedef struct rdm_instance rdm_instance;

typedef enum {
  RDM_OK = 0,
  RDM_ERR_PARSE = 1,
  RDM_ERR_DATA = 2,
  RDM_ERR_UNSUPPORTED = 3,
  RDM_ERR_UNDEFINED = 4,
  RDM_ERR_LIMIT = 5,
  RDM_ERR_UNKNOWN_TUPLE = 6,
  RDM_ERR_BUDGET = 7,
  RDM_ERR_RESOURCE = 8,
  RDM_ERR_CANCELLED = 9,
  RDM_ERR_INVALID_ARGUMENT = 10,
  RDM_ERR_INTERNAL = 11
} rdm_status;

typedef enum { RDM_SET = 0, RDM_BAG = 1 } rdm_semantics;

typedef enum {
  RDM_MODE_AUTO = 0, /* resilience: LP first, branch and bound if fractional */
  RDM_MODE_LP = 1,   /* resilience: relaxation only */
  RDM_MODE_ILP = 2,
  RDM_MODE_MILP = 3  /* responsibility default */
} rdm_mode;

typedef struct {
  rdm_semantics semantics;
  rdm_mode mode;
  uint64_t node_limit;
} rdm_solve_options;

/* semantics set, mode auto, node limit 10^6. */
RDM_API void rdm_solve_options_init(rdm_solve_options* options);

RDM_API const char* rdm_version(void);
RDM_API const char* rdm_last_error(void);
RDM_API const char* rdm_status_name(rdm_status status);
RDM_API void rdm_string_free(char* s);

/* Queries */
RDM_API rdm_status rdm_query_parse(const char* text, rdm_query** out);
RDM_API rdm_status rdm_query_load(const char* path, rdm_query** out);
RDM_API rdm_status rdm_query_to_text(const rdm_query* q, char** out);
RDM_API void rdm_query_free(rdm_query* q);

/* Instances. Warnings about merged duplicate rows go to a JSON array. */
RDM_API rdm_status rdm_instance_load(const rdm_query* q, const char* dir,
                                     rdm_semantics semantics, rdm_instance** out);
RDM_API rdm_status rdm_instance_random(const rdm_query* q, int64_t tuples_per_relation,
                                       int64_t domain, uint64_t seed, rdm_semantics semantics,
                                       rdm_instance** out);
RDM_API rdm_status rdm_instance_save(const rdm_instance* inst, const char* dir);
RDM_API rdm_status rdm_instance_warnings(const rdm_instance* inst, char** json_out);
RDM_API size_t rdm_instance_tuple_count(const rdm_instance* inst);
RDM_API void rdm_instance_free(rdm_instance* inst);

/* Solvers. `options` may be NULL for the defaults. */
RDM_API rdm_status rdm_resilience(const rdm_query* q, const rdm_instance* inst,
                                  const rdm_solve_options* options, char** json_out);
/* target is "Relation:row"; mode must be RDM_MODE_MILP or RDM_MODE_ILP
 * (RDM_MODE_AUTO selects milp). */
RDM_API rdm_status rdm_responsibility(const rdm_query* q, const rdm_instance* inst,
                                      const char* target, const rdm_solve_options* options,
                                      char** json_out);
/* Only node_limit is read from options. */
RDM_API rdm_status rdm_factorize(const rdm_query* q, const rdm_instance* inst,
                                 const rdm_solve_options* options, char** json_out);
RDM_API rdm_status rdm_classify(const rdm_query* q, char** json_out);

/* Linear models in LP text format. */
RDM_API rdm_status rdm_resilience_model(const rdm_query* q, const rdm_instance* inst,
                                        rdm_semantics semantics, char** lp_out);
RDM_API rdm_status rdm_responsibility_model(const rdm_query* q, const rdm_instance* inst,
                                            const char* target, rdm_semantics semantics,
                                            char** lp_out);

/* Exhaustive reference solvers (small instances only). */
RDM_API rdm_status rdm_oracle_resilience(const rdm_query* q, const rdm_instance* inst,
                                         rdm_semantics semantics, char** json_out);
RDM_API rdm_status rdm_oracle_responsibility(const rdm_query* q, const rdm_instance* inst,
                                             const char* target, rdm_semantics semantics,
                                             char** json_out);
RDM_API rdm_status rdm_oracle_minfac(const rdm_query* q, const rdm_instance* inst,
                                     char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* RDM_RDM_H */
