/*
 * Copyright (C) 2026 The ctcprep Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface to libctcprep.
 *
 * Every object is an opaque handle created by a *_new / *_load / *_open
 * function and released by the matching *_free. Fallible calls return a
 * ctcprep_status; on failure ctcprep_last_error() describes the problem
 * (the message is per thread and valid until the next failing call on that
 * thread). Strings returned through char** are owned by the caller and must
 * be released with ctcprep_string_free. Strings returned as const char* are
 * owned by the handle they came from.
 */

#ifndef CTCPREP_CTCPREP_H
#define CTCPREP_CTCPREP_H

#include <stddef.h>
#include <stdint.h>

#if defined(CTCPREP_BUILDING_LIBRARY)
#define CTCPREP_API __attribute__((visibility("default")))
#else
#define CTCPREP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctcprep_status {
    CTCPREP_OK = 0,
    CTCPREP_ERR_INVALID_ARGUMENT = 1,
    CTCPREP_ERR_IO = 2,
    CTCPREP_ERR_PARSE = 3,
    CTCPREP_ERR_INVALID_LABEL = 4,
    CTCPREP_ERR_INFEASIBLE_LABEL = 5,
    CTCPREP_ERR_INCOMPATIBLE_BATCH = 6,
    CTCPREP_ERR_UNSUPPORTED_FORMAT = 7,
    CTCPREP_ERR_OUT_OF_RANGE = 8,
    CTCPREP_ERR_CONFIG = 9,
    CTCPREP_ERR_EMPTY_INPUT = 10,
    CTCPREP_ERR_INVALID_RECORD = 11,
    CTCPREP_ERR_NOT_FOUND = 12,
    CTCPREP_ERR_GONE = 13,
    CTCPREP_ERR_VALIDATION = 14,
    CTCPREP_ERR_CHAPTER_ALIGNMENT = 15,
    CTCPREP_ERR_INTERNAL = 99
} ctcprep_status;

typedef struct ctcprep_config ctcprep_config;
typedef struct ctcprep_emissions ctcprep_emissions;
typedef struct ctcprep_vocab ctcprep_vocab;
typedef struct ctcprep_pairs ctcprep_pairs;
typedef struct ctcprep_manifest ctcprep_manifest;
typedef struct ctcprep_review_server ctcprep_review_server;

typedef struct ctcprep_token_span {
    int32_t token;
    size_t start_frame;
    size_t end_frame; /* exclusive */
    double score;     /* summed natural-log emission probability */
} ctcprep_token_span;

CTCPREP_API const char* ctcprep_version(void);
CTCPREP_API const char* ctcprep_last_error(void);
CTCPREP_API const char* ctcprep_status_name(ctcprep_status status);
CTCPREP_API void ctcprep_string_free(char* s);

/* Configuration (key = value file; see the README for keys). */
CTCPREP_API ctcprep_status ctcprep_config_new(ctcprep_config** out);
CTCPREP_API ctcprep_status ctcprep_config_load(const char* path, ctcprep_config** out);
CTCPREP_API ctcprep_status ctcprep_config_set(ctcprep_config* cfg, const char* key, const char* value);
CTCPREP_API ctcprep_status ctcprep_config_get(const ctcprep_config* cfg, const char* key, char** value);
CTCPREP_API void ctcprep_config_free(ctcprep_config* cfg);

/* Text. */
CTCPREP_API ctcprep_status ctcprep_normalize_line(const ctcprep_config* cfg, const char* raw, char** out);
/* Normalizes a UTF-8 file line by line, dropping empty and duplicate lines. */
CTCPREP_API ctcprep_status ctcprep_normalize_file(const ctcprep_config* cfg, const char* in_path, const char* out_path,
                                                  size_t* lines_written);
CTCPREP_API ctcprep_status ctcprep_romanize(const ctcprep_config* cfg, const char* normalized, char** out);

/* Vocabulary: one token per line, index = line number - 1. */
CTCPREP_API ctcprep_status ctcprep_vocab_load(const char* path, ctcprep_vocab** out);
/* Builds from the normalized lines of one or more text files. */
CTCPREP_API ctcprep_status ctcprep_vocab_build(const ctcprep_config* cfg, const char* const* text_paths, size_t n_paths,
                                               ctcprep_vocab** out);
CTCPREP_API ctcprep_status ctcprep_vocab_save(const ctcprep_vocab* vocab, const char* path);
CTCPREP_API size_t ctcprep_vocab_size(const ctcprep_vocab* vocab);
/* Writes up to `capacity` labels; *length receives the full count. */
CTCPREP_API ctcprep_status ctcprep_vocab_encode(const ctcprep_vocab* vocab, const char* normalized, int32_t* labels,
                                                size_t capacity, size_t* length);
CTCPREP_API ctcprep_status ctcprep_vocab_decode(const ctcprep_vocab* vocab, const int32_t* labels, size_t n, char** out);
CTCPREP_API void ctcprep_vocab_free(ctcprep_vocab* vocab);

/* Emission matrices and CTC. */
CTCPREP_API ctcprep_status ctcprep_emissions_load(const char* path, ctcprep_emissions** out);
/* Near-one-hot emissions tracing the canonical path of `normalized`. */
CTCPREP_API ctcprep_status ctcprep_emissions_synthesize(const ctcprep_vocab* vocab, const char* normalized,
                                                        size_t frames_per_token, double frame_duration,
                                                        ctcprep_emissions** out);
CTCPREP_API ctcprep_status ctcprep_emissions_save(const ctcprep_emissions* em, const char* path);
CTCPREP_API size_t ctcprep_emissions_frames(const ctcprep_emissions* em);
CTCPREP_API size_t ctcprep_emissions_vocab_size(const ctcprep_emissions* em);
CTCPREP_API double ctcprep_emissions_frame_duration(const ctcprep_emissions* em);
CTCPREP_API void ctcprep_emissions_free(ctcprep_emissions* em);

/* -inf / +inf when the labels cannot fit the frames. */
CTCPREP_API ctcprep_status ctcprep_ctc_log_likelihood(const ctcprep_emissions* em, const int32_t* labels, size_t n,
                                                      double* out);
CTCPREP_API ctcprep_status ctcprep_ctc_loss(const ctcprep_emissions* em, const int32_t* labels, size_t n, double* out);
CTCPREP_API ctcprep_status ctcprep_greedy_decode(const ctcprep_emissions* em, int32_t* labels, size_t capacity,
                                                 size_t* length);
/* `spans` must hold n entries. A wildcard_logprob of NAN uses the configured default. */
CTCPREP_API ctcprep_status ctcprep_forced_align(const ctcprep_emissions* em, const int32_t* labels, size_t n,
                                                int wildcard, double wildcard_logprob, ctcprep_token_span* spans,
                                                double* score);

/* Chapter pair discovery. */
CTCPREP_API ctcprep_status ctcprep_canonical_key(const char* filename, char** out);
CTCPREP_API ctcprep_status ctcprep_discover_pairs(const char* audio_dir, const char* text_dir, ctcprep_pairs** out);
CTCPREP_API size_t ctcprep_pairs_count(const ctcprep_pairs* pairs);
CTCPREP_API const char* ctcprep_pairs_chapter_id(const ctcprep_pairs* pairs, size_t i);
CTCPREP_API const char* ctcprep_pairs_audio_path(const ctcprep_pairs* pairs, size_t i);
CTCPREP_API const char* ctcprep_pairs_text_path(const ctcprep_pairs* pairs, size_t i);
CTCPREP_API size_t ctcprep_pairs_unmatched_count(const ctcprep_pairs* pairs);
CTCPREP_API const char* ctcprep_pairs_unmatched_path(const ctcprep_pairs* pairs, size_t i);
CTCPREP_API const char* ctcprep_pairs_unmatched_reason(const ctcprep_pairs* pairs, size_t i);
CTCPREP_API void ctcprep_pairs_free(ctcprep_pairs* pairs);

/* Manifests (one JSON object per line). */
CTCPREP_API ctcprep_status ctcprep_manifest_new(ctcprep_manifest** out);
CTCPREP_API ctcprep_status ctcprep_manifest_load(const char* path, ctcprep_manifest** out);
CTCPREP_API ctcprep_status ctcprep_manifest_save(const ctcprep_manifest* m, const char* path);
CTCPREP_API size_t ctcprep_manifest_size(const ctcprep_manifest* m);
CTCPREP_API const char* ctcprep_manifest_id(const ctcprep_manifest* m, size_t i);
CTCPREP_API const char* ctcprep_manifest_split(const ctcprep_manifest* m, size_t i);
CTCPREP_API const char* ctcprep_manifest_tag(const ctcprep_manifest* m, size_t i);
CTCPREP_API double ctcprep_manifest_duration(const ctcprep_manifest* m, size_t i);
/* Warnings gathered by load and align calls on this handle. */
CTCPREP_API size_t ctcprep_manifest_warning_count(const ctcprep_manifest* m);
CTCPREP_API const char* ctcprep_manifest_warning(const ctcprep_manifest* m, size_t i);
CTCPREP_API void ctcprep_manifest_free(ctcprep_manifest* m);

/* Aligns one chapter transcript against its emissions and appends one
 * record per verse to `m`. */
CTCPREP_API ctcprep_status ctcprep_align_chapter(const ctcprep_config* cfg, const char* chapter_id,
                                                 const char* audio_path, const char* text_path,
                                                 const ctcprep_emissions* em, const ctcprep_vocab* vocab,
                                                 ctcprep_manifest* m);
/* Cuts every record's span from its source recording (or `audio_path` when
 * not NULL) into its audio_filepath, resolving relative paths against base_dir. */
CTCPREP_API ctcprep_status ctcprep_segment_audio(const ctcprep_config* cfg, const ctcprep_manifest* m,
                                                 const char* audio_path, const char* base_dir, size_t* written);
CTCPREP_API ctcprep_status ctcprep_compute_stats(ctcprep_manifest* m);
CTCPREP_API ctcprep_status ctcprep_apply_tags(ctcprep_manifest* m, const char* tags_path);
/* `kept` receives a new handle; rejected records with their reasons are
 * written as JSON lines to rejected_path when not NULL. */
CTCPREP_API ctcprep_status ctcprep_filter(const ctcprep_config* cfg, const ctcprep_manifest* m, ctcprep_manifest** kept,
                                          const char* rejected_path, size_t* rejected_count);
CTCPREP_API ctcprep_status ctcprep_split(const ctcprep_config* cfg, ctcprep_manifest* m, size_t* train, size_t* test);
CTCPREP_API ctcprep_status ctcprep_write_metadata_csv(const ctcprep_manifest* m, const char* path);

/* Evaluation. */
CTCPREP_API double ctcprep_wer(const char* reference, const char* hypothesis);
CTCPREP_API double ctcprep_cer(const char* reference, const char* hypothesis);
/* Hypothesis file: id<TAB>text per line. */
CTCPREP_API ctcprep_status ctcprep_eval(const ctcprep_config* cfg, const ctcprep_manifest* m, const char* hyp_path,
                                        const char* report_path, char** table, double* wer, double* cer);

/* Review service. */
CTCPREP_API ctcprep_status ctcprep_review_server_open(const ctcprep_config* cfg, const char* manifest_path,
                                                      const char* tags_path, const char* static_dir,
                                                      ctcprep_review_server** out);
/* Blocks until ctcprep_review_server_stop is called from another thread. */
CTCPREP_API ctcprep_status ctcprep_review_server_listen(ctcprep_review_server* srv, const char* host, int port);
/* Binds an ephemeral port; serve it with ctcprep_review_server_listen_bound. */
CTCPREP_API ctcprep_status ctcprep_review_server_bind(ctcprep_review_server* srv, const char* host, int* port);
CTCPREP_API ctcprep_status ctcprep_review_server_listen_bound(ctcprep_review_server* srv);
CTCPREP_API void ctcprep_review_server_stop(ctcprep_review_server* srv);
CTCPREP_API void ctcprep_review_server_free(ctcprep_review_server* srv);

#ifdef __cplusplus
}
#endif

#endif /* CTCPREP_CTCPREP_H */
