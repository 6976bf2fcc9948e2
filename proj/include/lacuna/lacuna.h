/*
 * Copyright 2026 The Lacuna Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LACUNA_LACUNA_H_
#define LACUNA_LACUNA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LACUNA_BUILDING_LIBRARY)
#define LACUNA_API __attribute__((visibility("default")))
#else
#define LACUNA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Zero is success; the rest mirror the library's error kinds. */
typedef enum lacuna_status {
  LACUNA_OK = 0,
  LACUNA_INVALID_ARGUMENT = 1,
  LACUNA_IO = 2,
  LACUNA_NOT_FOUND = 3,
  LACUNA_UNBALANCED_MARKUP = 4,
  LACUNA_EMPTY_AFTER_NORMALIZATION = 5,
  LACUNA_TOO_FEW_DOCUMENTS = 6,
  LACUNA_EMPTY_CORPUS = 7,
  LACUNA_UNKNOWN_ID = 8,
  LACUNA_BUDGET_INFEASIBLE = 9,
  LACUNA_SEQUENCE_TOO_LONG = 10,
  LACUNA_NO_MASKED_POSITIONS = 11,
  LACUNA_NON_FINITE_LOSS = 12,
  LACUNA_VERSION_MISMATCH = 13,
  LACUNA_VOCABULARY_MISMATCH = 14,
  LACUNA_CORRUPT_FILE = 15,
  LACUNA_NO_VALID_COMPLETION = 16,
  LACUNA_EMPTY_INPUT = 17,
  LACUNA_EMPTY_TEST_SET = 18,
  LACUNA_INSUFFICIENT_SPANS = 19,
  LACUNA_DISTRACTOR_UNAVAILABLE = 20,
  LACUNA_UNKNOWN_INSTANCE = 21,
  LACUNA_NO_OVERLAP = 22,
  LACUNA_DEGENERATE_MARGINALS = 23,
  LACUNA_DUPLICATE_LABEL = 24,
  LACUNA_STORE_UNAVAILABLE = 25,
  LACUNA_INTERNAL = 100
} lacuna_status;

/* Opaque handles. */
typedef struct lacuna_model lacuna_model;
typedef struct lacuna_server lacuna_server;

/* Called once per training step with a JSON record
 * {"step", "loss", "learning_rate", "gradient_norm", "tokens_per_second"}. */
typedef void (*lacuna_progress_fn)(const char* record, void* user);

LACUNA_API const char* lacuna_version(void);
LACUNA_API const char* lacuna_status_name(lacuna_status status);

/* Message of the last failure on the calling thread; empty after success. */
LACUNA_API const char* lacuna_last_error(void);

/* Frees any string returned through a char** out parameter. */
LACUNA_API void lacuna_string_free(char* s);

/* Corpus ------------------------------------------------------------------ */

/* Writes the deterministic synthetic corpus as raw records. */
LACUNA_API lacuna_status lacuna_synthesize(const char* out_path, size_t n_docs, uint64_t seed);

/* Normalizes raw records and writes all.jsonl, train.jsonl and test.jsonl
 * under out_dir. *report: JSON with counts and rejected records. */
LACUNA_API lacuna_status lacuna_prepare(const char* in_path, const char* out_dir,
                                        double test_fraction, uint64_t seed, int skip_invalid,
                                        char** report);

/* *json: per-genre and total counts. *table: aligned text. Either may be NULL. */
LACUNA_API lacuna_status lacuna_stats(const char* corpus_path, char** json, char** table);

/* Tokenizer ---------------------------------------------------------------- */

LACUNA_API lacuna_status lacuna_tokenizer_train(const char* corpus_path, size_t vocab_size,
                                                uint64_t seed, const char* out_path,
                                                char** report);

/* Training ----------------------------------------------------------------- */

/* config_path may be NULL for defaults. options_json may be NULL or hold
 * batch_size, learning_rate, warmup_fraction, clip_norm, mask_rate,
 * mask_delimiters.
 * The model vocabulary size always follows the vocabulary file. */
LACUNA_API lacuna_status lacuna_train(const char* corpus_path, const char* vocab_path,
                                      const char* config_path, const char* out_path, int steps,
                                      uint64_t seed, const char* options_json,
                                      lacuna_progress_fn progress, void* user, char** summary);

/* Inference ---------------------------------------------------------------- */

LACUNA_API lacuna_status lacuna_model_open(const char* checkpoint_path, const char* vocab_path,
                                           lacuna_model** out);
LACUNA_API void lacuna_model_close(lacuna_model* model);

/* {"model_hash", "vocab_hash", "parameters", "step", "config"} */
LACUNA_API lacuna_status lacuna_model_info(const lacuna_model* model, char** json);

/* request: {"text", "gap_index"?, "k"?, "max_tokens_per_sign"?} */
LACUNA_API lacuna_status lacuna_suggest(const lacuna_model* model, const char* request,
                                        char** response);

/* Evaluation --------------------------------------------------------------- */

/* options: {"mask_rate"?, "ks"?, "seed"?} */
LACUNA_API lacuna_status lacuna_eval_tokens(const lacuna_model* model, const char* corpus_path,
                                            const char* options, char** report, char** table);

/* options: {"lengths"?, "ks"?, "max_spans"?, "min_spans"?,
 * "max_tokens_per_sign"?, "seed"?}. plot_csv may be NULL. */
LACUNA_API lacuna_status lacuna_eval_spans(const lacuna_model* model, const char* corpus_path,
                                           const char* options, char** curve, char** table,
                                           char** plot_csv);

/* options: {"count"?, "lengths"?, "seed"?, "k"?}. pool_path may be NULL to
 * draw distractors from corpus_path. Writes out_path and its sidecar. */
LACUNA_API lacuna_status lacuna_annotate_generate(const lacuna_model* model,
                                                  const char* corpus_path, const char* pool_path,
                                                  const char* options, const char* out_path,
                                                  char** summary);

LACUNA_API lacuna_status lacuna_annotate_score(const char* instances_path,
                                               const char* labels_path, char** report,
                                               char** table);

/* Service ------------------------------------------------------------------ */

/* config_path may be NULL; overrides is NULL or a JSON object of config
 * keys. Environment variables apply after the file and before overrides.
 * Returns once the socket is bound; loading continues in the background. */
LACUNA_API lacuna_status lacuna_server_start(const char* config_path, const char* overrides,
                                             lacuna_server** out);
LACUNA_API int lacuna_server_port(const lacuna_server* server);
/* Blocks until loading has finished. */
LACUNA_API lacuna_status lacuna_server_wait_ready(lacuna_server* server);
/* Blocks until the server stops. */
LACUNA_API void lacuna_server_wait(lacuna_server* server);
/* Safe to call while another thread waits. */
LACUNA_API void lacuna_server_stop(lacuna_server* server);
/* Stops if needed and releases the handle. */
LACUNA_API void lacuna_server_free(lacuna_server* server);

#ifdef __cplusplus
}
#endif

#endif /* LACUNA_LACUNA_H_ */
