#ifndef TASKCHAIN_TASKCHAIN_H
#define TASKCHAIN_TASKCHAIN_H

/*
 * C interface of the taskchain engine.
 *
 * Models and run results are opaque handles owned by the caller and released
 * with the matching *_destroy function. Every fallible call returns a
 * tc_status; on failure tc_last_error() describes the problem. The message
 * is thread-local and valid until the next failing call on the same thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TASKCHAIN_BUILDING)
#    define TC_API __declspec(dllexport)
#  else
#    define TC_API __declspec(dllimport)
#  endif
#else
#  define TC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tc_status
{
    TC_OK = 0,
    TC_ERR_INVALID_ARGUMENT = 1,
    TC_ERR_STATE = 2,    /* handle not in a state that allows the call */
    TC_ERR_IO = 3,
    TC_ERR_PARSE = 4,
    TC_ERR_INTERNAL = 5
} tc_status;

typedef struct tc_model tc_model;
typedef struct tc_run tc_run;

typedef struct tc_cultural_params
{
    uint32_t agents;   /* N */
    uint32_t features; /* F */
    uint32_t traits;   /* q */
    double omega_gate;
    uint64_t steps;
    uint64_t seed;
} tc_cultural_params;

typedef struct tc_sir_params
{
    uint32_t agents; /* N */
    uint32_t degree; /* k, even */
    double p_si;
    double p_ir;
    double p_rs;
    uint64_t steps;
    uint32_t subset_size; /* s, divides N */
    uint64_t seed;
    double initial_infected;
} tc_sir_params;

typedef struct tc_engine_config
{
    uint32_t n_workers;
    uint32_t cycle_cap;      /* C */
    int trace_enabled;       /* non-zero keeps the lifecycle trace */
    double watchdog_seconds; /* 0 disables */
} tc_engine_config;

typedef struct tc_validation
{
    uint64_t events;
    uint64_t tasks;
    uint64_t pairs_checked;
    uint64_t order_violations;
    uint64_t lifecycle_violations;
    uint64_t creation_violations;
    uint64_t parse_errors;
    uint64_t oracle_digest; /* digest of the sequential reference run */
} tc_validation;

TC_API const char *tc_last_error(void);
TC_API const char *tc_status_string(tc_status status);

TC_API void tc_cultural_params_default(tc_cultural_params *out);
TC_API void tc_sir_params_default(tc_sir_params *out);
TC_API void tc_engine_config_default(tc_engine_config *out);

TC_API tc_status tc_model_create_cultural(const tc_cultural_params *params, tc_model **out);
TC_API tc_status tc_model_create_sir(const tc_sir_params *params, tc_model **out);
TC_API void tc_model_destroy(tc_model *model);

/* "cultural" or "sir". */
TC_API const char *tc_model_kind(const tc_model *model);
TC_API tc_status tc_model_digest(const tc_model *model, uint64_t *out);
/* Number of tasks the model will create over a full run. */
TC_API tc_status tc_model_task_count(const tc_model *model, uint64_t *out);

/* Runs a fresh model with the engine. A model can be run once; a second
 * run (engine or sequential) fails with TC_ERR_STATE. A watchdog abort is
 * reported through tc_run_aborted, not as an error. */
TC_API tc_status tc_run_engine(tc_model *model, const tc_engine_config *config, tc_run **out);
/* Runs a fresh model with the sequential reference executor. */
TC_API tc_status tc_run_sequential(tc_model *model, uint64_t *digest);

TC_API void tc_run_destroy(tc_run *run);
TC_API uint64_t tc_run_digest(const tc_run *run);
TC_API double tc_run_wall_ms(const tc_run *run);
TC_API int tc_run_aborted(const tc_run *run);
TC_API uint64_t tc_run_tasks_executed(const tc_run *run);
TC_API size_t tc_run_trace_length(const tc_run *run);
/* Writes the trace as CSV ("seq,worker_id,task_id,kind"). Requires tracing. */
TC_API tc_status tc_run_write_trace(const tc_run *run, const char *path);

/* Validates a run's in-memory trace against the ground-truth dependences of
 * `reference`, a fresh model built with the same parameters. `report_path`
 * may be NULL. */
TC_API tc_status tc_run_validate(const tc_run *run, const tc_model *reference, const char *report_path,
                                 tc_validation *out);
/* Same, reading the trace from a CSV file. */
TC_API tc_status tc_validate_trace_file(const char *trace_path, const tc_model *reference,
                                        const char *report_path, tc_validation *out);

/* Reads a results CSV and writes the per-(model, s, n) summary CSV. Cells
 * with fewer than two usable runs are still written (sem is "nan"); their
 * number is stored in `sparse_cells` when it is not NULL. */
TC_API tc_status tc_summarize_csv(const char *results_path, const char *summary_path, uint64_t *sparse_cells);

#ifdef __cplusplus
}
#endif

#endif
