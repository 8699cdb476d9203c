/*
 * Copyright 2026 The robeval Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to librobeval.
 *
 * Every fallible call returns an rbe_status. On failure the message is kept
 * per thread and read with rbe_last_error(). Strings returned through char**
 * out-parameters are heap-allocated and released with rbe_free_string().
 * Handles are opaque; a metric handle may be used from several threads.
 */
#ifndef ROBEVAL_ROBEVAL_H_
#define ROBEVAL_ROBEVAL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ROBEVAL_BUILDING_LIBRARY)
#define ROBEVAL_API __attribute__((visibility("default")))
#else
#define ROBEVAL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbe_status {
  RBE_OK = 0,
  RBE_ERR_VALIDATION = 1,
  RBE_ERR_IO = 2,
  RBE_ERR_REMOTE = 3,
  RBE_ERR_INTERNAL = 4
} rbe_status;

typedef struct rbe_attack rbe_attack;
typedef struct rbe_vocab rbe_vocab;
typedef struct rbe_metric rbe_metric;

ROBEVAL_API const char* rbe_version(void);

/* Message of the last failed call on this thread, "" when none. */
ROBEVAL_API const char* rbe_last_error(void);
ROBEVAL_API void rbe_free_string(char* s);

/* $ROBEVAL_DATA_DIR or the build-time data directory. */
ROBEVAL_API rbe_status rbe_default_data_dir(char** out);

/* Attacks. kind: intrude, disemvowel, keyboard-typo, phonetic, visual.
 * resources_dir may be NULL for the default data directory. */
ROBEVAL_API rbe_status rbe_attack_create(const char* kind, double level, uint64_t seed,
                                         const char* resources_dir, rbe_attack** out);
ROBEVAL_API void rbe_attack_free(rbe_attack* attack);
ROBEVAL_API rbe_status rbe_attack_perturb(const rbe_attack* attack, const char* text,
                                          char** out);
/* Reads a segments JSONL file and writes the perturbed corpus. */
ROBEVAL_API rbe_status rbe_attack_perturb_file(const rbe_attack* attack, const char* in_path,
                                               const char* out_path);

/* WordPiece vocabularies. */
ROBEVAL_API rbe_status rbe_vocab_load(const char* path, int uncased, rbe_vocab** out);
ROBEVAL_API void rbe_vocab_free(rbe_vocab* vocab);
/* JSON array of pieces. */
ROBEVAL_API rbe_status rbe_vocab_tokenize(const rbe_vocab* vocab, const char* text,
                                          char** out_json);
/* JSON object {segments, total_unk, avg_per_segment}. attack may be NULL. */
ROBEVAL_API rbe_status rbe_vocab_unk_stats_file(const rbe_vocab* vocab, const char* segments_path,
                                                const rbe_attack* attack, char** out_json);
ROBEVAL_API rbe_status rbe_count_unk(const char* const* pieces, size_t n, size_t* out);

/* Metrics. config_json: {"provider": {...} or "toy", "layer": "first"}. */
ROBEVAL_API rbe_status rbe_metric_create(const char* config_json, rbe_metric** out);
ROBEVAL_API void rbe_metric_free(rbe_metric* metric);
ROBEVAL_API rbe_status rbe_metric_score_pair(rbe_metric* metric, const char* candidate,
                                             const char* reference, double* precision,
                                             double* recall, double* f1);
/* Scores every line of an outputs JSONL file against the reference with the
 * same seg_id and writes a scores TSV. Pairs that fail are listed in the
 * summary JSON {scored, failed, errors} and left out of the TSV. */
ROBEVAL_API rbe_status rbe_metric_score_files(rbe_metric* metric, const char* cands_path,
                                              const char* refs_path, const char* out_path,
                                              int full, size_t workers, char** summary_json);
ROBEVAL_API rbe_status rbe_metric_export_similarity(rbe_metric* metric, const char* candidate,
                                                    const char* reference, const char* out_path);

/* Kendall-like DARR correlation as JSON. ties: denominator, discordant, drop
 * (NULL for denominator). */
ROBEVAL_API rbe_status rbe_evaluate_files(const char* judgments_path, const char* scores_path,
                                          const char* ties, char** out_json);

/* Runs a sweep config file and writes its reports. out_dir may be NULL,
 * seed may be NULL, workers 0 keeps the config value. */
ROBEVAL_API rbe_status rbe_sweep_run(const char* config_path, const char* out_dir,
                                     const uint64_t* seed, size_t workers, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* ROBEVAL_ROBEVAL_H_ */
