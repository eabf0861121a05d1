// Copyright 2026 The demodebias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the demodebias library. Objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every call
 * that can fail returns a dd_status; on failure dd_last_error() describes
 * the problem for the calling thread. Arrays are row-major doubles. */

#ifndef DEMODEBIAS_DEMODEBIAS_H_
#define DEMODEBIAS_DEMODEBIAS_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define DD_API __attribute__((visibility("default")))
#else
#define DD_API
#endif

typedef enum dd_status {
  DD_OK = 0,
  DD_ERR_EMPTY_DATASET = 1,
  DD_ERR_NON_FINITE_VALUE = 2,
  DD_ERR_MISSING_STATS = 3,
  DD_ERR_DIMENSION_MISMATCH = 4,
  DD_ERR_EMPTY_CHUNK = 5,
  DD_ERR_OUT_OF_RANGE = 6,
  DD_ERR_INVALID_DEMONSTRATION = 7,
  DD_ERR_INFEASIBLE_WORLD = 8,
  DD_ERR_INVALID_WEIGHTS = 9,
  DD_ERR_CHUNK_TOO_LONG = 10,
  DD_ERR_DIVERGED_LOSS = 11,
  DD_ERR_INSUFFICIENT_DATA = 12,
  DD_ERR_TOO_NEAR_END = 13,
  DD_ERR_DEGENERATE_LENGTH = 14,
  DD_ERR_EMPTY_SELECTION = 15,
  DD_ERR_NO_SKILL_TAGS = 16,
  DD_ERR_PERFECT_SCORE_UNFITTABLE = 17,
  DD_ERR_DEGENERATE_X = 18,
  DD_ERR_NON_POSITIVE_GAP = 19,
  DD_ERR_CONFIG = 20,
  DD_ERR_IO = 21,
  DD_ERR_PARSE = 22,
  DD_ERR_INVALID_ARGUMENT = 100,
  DD_ERR_INTERNAL = 101
} dd_status;

typedef struct dd_dataset dd_dataset;
typedef struct dd_stats dd_stats;
typedef struct dd_velocity_model dd_velocity_model;
typedef struct dd_policy dd_policy;

typedef struct dd_power_law_fit {
  double alpha;
  double beta;
  double pearson_r;
  int n_points;
  int n_excluded; /* perfect scores left out of the fit */
} dd_power_law_fit;

DD_API const char* dd_version(void);
DD_API const char* dd_status_name(dd_status status);
/* Message of the last failed call on this thread ("" if none). */
DD_API const char* dd_last_error(void);
/* {"error": {"code", "message", "exit_code"[, "stage"]}} for the last
 * failed call on this thread; "{}" if none. */
DD_API const char* dd_last_error_json(void);
/* Process exit code for a status: 0 ok, 2 configuration, 3 stage failure. */
DD_API int dd_exit_code(dd_status status);
/* Frees strings returned through char** out-parameters. */
DD_API void dd_string_free(char* s);

/* ---- Datasets ---------------------------------------------------------- */

/* world_json may be NULL for the default world; mix is a preset name
 * ("two-speed", "single-speed", ...) or a JSON array of profiles. */
DD_API dd_status dd_dataset_generate(const char* world_json, const char* mix,
                                     int n_demos, uint64_t seed,
                                     int chunk_size, dd_dataset** out);
DD_API dd_status dd_dataset_load(const char* path, int chunk_size,
                                 dd_dataset** out);
DD_API dd_status dd_dataset_save(const dd_dataset* dataset, const char* path);
DD_API size_t dd_dataset_size(const dd_dataset* dataset);
/* Shape of demo `index`: rows, action dim and observation dim. */
DD_API dd_status dd_dataset_demo_shape(const dd_dataset* dataset, size_t index,
                                       int* rows, int* action_dim,
                                       int* observation_dim);
/* Copies rows x action_dim actions of demo `index` into `out`. */
DD_API dd_status dd_dataset_demo_actions(const dd_dataset* dataset,
                                         size_t index, double* out);
DD_API void dd_dataset_free(dd_dataset* dataset);

/* ---- Normalization stats ---------------------------------------------- */

DD_API dd_status dd_stats_compute(const dd_dataset* dataset, dd_stats** out);
DD_API dd_status dd_stats_from_json(const char* json, dd_stats** out);
DD_API dd_status dd_stats_to_json(const dd_stats* stats, char** out);
DD_API void dd_stats_free(dd_stats* stats);

/* ---- Velocity metric, chunk-length search, rescaling ------------------- */

/* eef_mask has `cols` entries, nonzero for end-effector dimensions. */
DD_API dd_status dd_velocity_metric(const double* actions, int rows, int cols,
                                    const unsigned char* eef_mask,
                                    const dd_stats* stats, double* out);
/* Chunk length L in [round(clamp_low*T), min(round(clamp_high*T), rows-t)]
 * whose velocity is closest to vm_pred. */
DD_API dd_status dd_search_chunk_length(const double* actions, int rows,
                                        int cols,
                                        const unsigned char* eef_mask,
                                        const dd_stats* stats, int t,
                                        double vm_pred, int chunk_size,
                                        double clamp_low, double clamp_high,
                                        int* out_length);
/* Resamples rows [t, t+length) to chunk_size rows written to `out`
 * (chunk_size x cols). discrete_mask may be NULL. */
DD_API dd_status dd_rescale_chunk(const double* actions, int rows, int cols,
                                  int t, int length, int chunk_size,
                                  const unsigned char* discrete_mask,
                                  double* out);

/* ---- Trained models ----------------------------------------------------- */

DD_API dd_status dd_vm_load(const char* path, dd_velocity_model** out);
/* Predicted raw chunk velocity for one observation. */
DD_API dd_status dd_vm_predict(const dd_velocity_model* model,
                               const double* observation, int observation_dim,
                               double* out);
DD_API void dd_vm_free(dd_velocity_model* model);

DD_API dd_status dd_policy_load(const char* path, dd_policy** out);
DD_API dd_status dd_policy_shape(const dd_policy* policy, int* chunk_size,
                                 int* action_dim, int* observation_dim);
/* Writes chunk_size x action_dim raw actions to `out`. */
DD_API dd_status dd_policy_predict(const dd_policy* policy,
                                   const double* observation,
                                   int observation_dim, double* out);
DD_API void dd_policy_free(dd_policy* policy);

/* ---- Scaling ------------------------------------------------------------ */

/* Fits gap = beta * x^alpha with gap = 1 - score; perfect scores are
 * excluded and counted. */
DD_API dd_status dd_fit_power_law(const double* x, const double* score, int n,
                                  dd_power_law_fit* out);

/* ---- Stages ------------------------------------------------------------- */

/* Runs a stage ("generate", "sample", "stats", "train-vm", "debias",
 * "train-policy", "evaluate", "bench", "fit-scaling", "report" or
 * "pipeline"). config_path and overrides_json (merged over the file) may be
 * NULL. On success *result_json holds the stage result and must be freed
 * with dd_string_free. */
DD_API dd_status dd_run_stage(const char* stage, const char* config_path,
                              const char* overrides_json, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* DEMODEBIAS_DEMODEBIAS_H_ */
