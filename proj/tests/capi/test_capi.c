// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the C API as a C program linked only against the shared library.

#include <math.h>
#include <pthread.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "ctcprep/ctcprep.h"

static int g_failures = 0;
static int g_checks = 0;

#define CHECK(cond)                                                        \
    do {                                                                   \
        ++g_checks;                                                        \
        if (!(cond)) {                                                     \
            ++g_failures;                                                  \
            fprintf(stderr, "%s:%d: CHECK(%s) failed\n", __FILE__, __LINE__, #cond); \
        }                                                                  \
    } while (0)

#define CHECK_OK(expr)                                                     \
    do {                                                                   \
        ctcprep_status st_ = (expr);                                       \
        ++g_checks;                                                        \
        if (st_ != CTCPREP_OK) {                                           \
            ++g_failures;                                                  \
            fprintf(stderr, "%s:%d: %s returned %s: %s\n", __FILE__, __LINE__, #expr, \
                    ctcprep_status_name(st_), ctcprep_last_error());       \
        }                                                                  \
    } while (0)

static char g_dir[256];

static const char* path_in(const char* name) {
    static char buf[4][512];
    static int slot = 0;
    slot = (slot + 1) % 4;
    snprintf(buf[slot], sizeof buf[slot], "%s/%s", g_dir, name);
    return buf[slot];
}

static void write_file(const char* path, const char* text) {
    FILE* f = fopen(path, "wb");
    if (!f) {
        perror(path);
        exit(2);
    }
    fputs(text, f);
    fclose(f);
}

static void make_chapter_dirs(void) {
    char cmd[600];
    snprintf(cmd, sizeof cmd, "mkdir -p '%s/audio' '%s/text'", g_dir, g_dir);
    if (system(cmd) != 0) exit(2);
    write_file(path_in("audio/B01__01_Matthew__IKKTBLN1DA.MP3"), "ID3");
    write_file(path_in("audio/Luke_02.wav"), "RIFF");
    write_file(path_in("text/ikkNT_070_MAT_01_read.txt"), "Ab.\nC!\n");
    write_file(path_in("chapter.txt"), "Ab.\nC!\n");
}

static void test_general(void) {
    CHECK(strlen(ctcprep_version()) > 0);
    CHECK(strcmp(ctcprep_status_name(CTCPREP_OK), "ok") == 0);
    CHECK(strcmp(ctcprep_status_name(CTCPREP_ERR_INFEASIBLE_LABEL), "infeasible_label") == 0);
    CHECK(strcmp(ctcprep_status_name(CTCPREP_ERR_CONFIG), ctcprep_status_name(CTCPREP_ERR_IO)) != 0);
    CHECK(ctcprep_config_new(NULL) == CTCPREP_ERR_INVALID_ARGUMENT);
    CHECK(strlen(ctcprep_last_error()) > 0);
}

static void test_config(void) {
    ctcprep_config* cfg = NULL;
    char* value = NULL;
    CHECK_OK(ctcprep_config_new(&cfg));
    CHECK_OK(ctcprep_config_get(cfg, "split.ratio", &value));
    CHECK(value && strcmp(value, "0.8") == 0);
    ctcprep_string_free(value);
    CHECK_OK(ctcprep_config_set(cfg, "split.seed", "9"));
    CHECK(ctcprep_config_set(cfg, "split.ratio", "2") == CTCPREP_ERR_CONFIG);
    CHECK(ctcprep_config_set(cfg, "no.such.key", "1") == CTCPREP_ERR_CONFIG);
    CHECK(strstr(ctcprep_last_error(), "no.such.key") != NULL);
    CHECK_OK(ctcprep_config_get(cfg, "split.ratio", &value));
    CHECK(strcmp(value, "0.8") == 0); /* rejected set leaves the value alone */
    ctcprep_string_free(value);
    ctcprep_config_free(cfg);

    write_file(path_in("c.conf"), "filter.require_tag_high = true\n");
    CHECK_OK(ctcprep_config_load(path_in("c.conf"), &cfg));
    CHECK_OK(ctcprep_config_get(cfg, "filter.require_tag_high", &value));
    CHECK(strcmp(value, "true") == 0);
    ctcprep_string_free(value);
    ctcprep_config_free(cfg);
    CHECK(ctcprep_config_load(path_in("missing.conf"), &cfg) == CTCPREP_ERR_IO);
}

static void test_text(void) {
    char* out = NULL;
    size_t lines = 0;
    CHECK_OK(ctcprep_normalize_line(NULL, "Okwu, 12 ab\xE1\xBB\xA5.", &out));
    CHECK(strcmp(out, "okwu ab\xE1\xBB\xA5") == 0);
    ctcprep_string_free(out);
    CHECK_OK(ctcprep_romanize(NULL, "ab\xE1\xBB\xA5", &out));
    CHECK(strcmp(out, "a b u") == 0);
    ctcprep_string_free(out);
    write_file(path_in("raw.txt"), "A b.\na b\n\n1.\nc\n");
    CHECK_OK(ctcprep_normalize_file(NULL, path_in("raw.txt"), path_in("norm.txt"), &lines));
    CHECK(lines == 2);
}

static void test_ctc(void) {
    ctcprep_vocab* vocab = NULL;
    ctcprep_emissions* em = NULL;
    const char* paths[1];
    int32_t labels[16];
    size_t n = 0, decoded_n = 0;
    int32_t decoded[16];
    ctcprep_token_span spans[16];
    double ll = 0.0, score = 0.0;
    char* text = NULL;

    write_file(path_in("corpus.txt"), "ab c\n");
    paths[0] = path_in("corpus.txt");
    CHECK_OK(ctcprep_vocab_build(NULL, paths, 1, &vocab));
    CHECK(ctcprep_vocab_size(vocab) == 6);
    CHECK_OK(ctcprep_vocab_save(vocab, path_in("vocab.txt")));

    CHECK_OK(ctcprep_vocab_encode(vocab, "ab c", labels, 16, &n));
    CHECK(n == 4);
    CHECK(labels[0] == 3 && labels[1] == 4 && labels[2] == 2 && labels[3] == 5);
    /* A short buffer is filled partially; the full length is still reported. */
    labels[2] = -7;
    CHECK_OK(ctcprep_vocab_encode(vocab, "ab c", labels, 2, &n));
    CHECK(n == 4 && labels[2] == -7);

    CHECK_OK(ctcprep_emissions_synthesize(vocab, "ab c", 2, 0.02, &em));
    CHECK(ctcprep_emissions_frames(em) == 8);
    CHECK(ctcprep_emissions_vocab_size(em) == 6);
    CHECK(ctcprep_emissions_frame_duration(em) == 0.02);
    CHECK_OK(ctcprep_emissions_save(em, path_in("e.emissions")));
    ctcprep_emissions_free(em);
    em = NULL;
    CHECK_OK(ctcprep_emissions_load(path_in("e.emissions"), &em));

    CHECK_OK(ctcprep_vocab_encode(vocab, "ab c", labels, 16, &n));
    CHECK_OK(ctcprep_ctc_log_likelihood(em, labels, n, &ll));
    CHECK(ll < 0.0 && ll > -0.01);
    CHECK_OK(ctcprep_greedy_decode(em, decoded, 16, &decoded_n));
    CHECK(decoded_n == 4);
    CHECK_OK(ctcprep_vocab_decode(vocab, decoded, decoded_n, &text));
    CHECK(strcmp(text, "ab c") == 0);
    ctcprep_string_free(text);

    CHECK_OK(ctcprep_forced_align(em, labels, n, 0, NAN, spans, &score));
    CHECK(spans[0].start_frame == 0 && spans[0].end_frame == 2);
    CHECK(spans[3].start_frame == 6 && spans[3].end_frame == 8);
    CHECK(fabs(spans[0].score + spans[1].score + spans[2].score + spans[3].score - score) < 1e-9);

    {
        const int32_t too_long[9] = {3, 4, 3, 4, 3, 4, 3, 4, 3};
        const int32_t bad[1] = {42};
        CHECK(ctcprep_forced_align(em, too_long, 9, 0, NAN, spans, &score) == CTCPREP_ERR_INFEASIBLE_LABEL);
        CHECK_OK(ctcprep_ctc_loss(em, too_long, 9, &ll));
        CHECK(isinf(ll) && ll > 0);
        CHECK(ctcprep_ctc_loss(em, bad, 1, &ll) == CTCPREP_ERR_INVALID_LABEL);
    }
    write_file(path_in("bad.emissions"), "1 3 0.02\n<pad> a b\n0 -inf\n");
    ctcprep_emissions_free(em);
    em = NULL;
    CHECK(ctcprep_emissions_load(path_in("bad.emissions"), &em) == CTCPREP_ERR_PARSE);
    CHECK(em == NULL);
    CHECK(strstr(ctcprep_last_error(), ":3") != NULL);
    ctcprep_vocab_free(vocab);
}

static void test_metrics(void) {
    CHECK(ctcprep_wer("a b c", "a x c") == 1.0 / 3.0);
    CHECK(ctcprep_cer("abc", "ab") == 1.0 / 3.0);
    CHECK(isnan(ctcprep_wer(NULL, "a")));
    CHECK(isinf(ctcprep_wer("", "a")));
}

static void test_pipeline(void) {
    ctcprep_vocab* vocab = NULL;
    ctcprep_emissions* em = NULL;
    ctcprep_manifest* m = NULL;
    ctcprep_manifest* kept = NULL;
    ctcprep_pairs* pairs = NULL;
    ctcprep_config* cfg = NULL;
    size_t train = 0, test = 0, rejected = 0;
    char* key = NULL;
    char* table = NULL;
    double wer = -1.0, cer = -1.0;

    CHECK_OK(ctcprep_canonical_key("B01__01_Matthew__IKKTBLN1DA.MP3", &key));
    CHECK(strcmp(key, "Matthew_01") == 0);
    ctcprep_string_free(key);
    CHECK(ctcprep_canonical_key("notes.txt", &key) == CTCPREP_ERR_NOT_FOUND);

    make_chapter_dirs();
    CHECK_OK(ctcprep_discover_pairs(path_in("audio"), path_in("text"), &pairs));
    CHECK(ctcprep_pairs_count(pairs) == 1);
    CHECK(strcmp(ctcprep_pairs_chapter_id(pairs, 0), "Matthew_01") == 0);
    CHECK(ctcprep_pairs_unmatched_count(pairs) == 1);
    CHECK(strstr(ctcprep_pairs_unmatched_path(pairs, 0), "Luke_02") != NULL);
    CHECK(ctcprep_pairs_chapter_id(pairs, 5) == NULL);
    ctcprep_pairs_free(pairs);

    CHECK_OK(ctcprep_vocab_load(path_in("vocab.txt"), &vocab));
    CHECK_OK(ctcprep_emissions_synthesize(vocab, "ab c", 3, 0.02, &em));
    CHECK_OK(ctcprep_manifest_new(&m));
    CHECK_OK(ctcprep_align_chapter(NULL, "Matthew_01", "audio/Matthew_01.wav", path_in("chapter.txt"), em,
                                   vocab, m));
    CHECK(ctcprep_manifest_size(m) == 2);
    CHECK(strcmp(ctcprep_manifest_id(m, 0), "Matthew_01_001") == 0);
    CHECK(fabs(ctcprep_manifest_duration(m, 0) - 0.12) < 1e-9);
    CHECK(fabs(ctcprep_manifest_duration(m, 1) - 0.06) < 1e-9);
    CHECK(strcmp(ctcprep_manifest_split(m, 0), "unassigned") == 0);
    CHECK(ctcprep_manifest_id(m, 9) == NULL);
    CHECK_OK(ctcprep_compute_stats(m));

    /* Everything is shorter than the 1 s default minimum. */
    CHECK_OK(ctcprep_filter(NULL, m, &kept, path_in("rejected.jsonl"), &rejected));
    CHECK(ctcprep_manifest_size(kept) == 0 && rejected == 2);
    ctcprep_manifest_free(kept);
    CHECK_OK(ctcprep_config_new(&cfg));
    CHECK_OK(ctcprep_config_set(cfg, "filter.min_duration", "off"));
    CHECK_OK(ctcprep_config_set(cfg, "filter.min_word_rate", "off"));
    CHECK_OK(ctcprep_config_set(cfg, "filter.max_word_rate", "off"));
    CHECK_OK(ctcprep_config_set(cfg, "filter.min_char_rate", "off"));
    CHECK_OK(ctcprep_config_set(cfg, "filter.max_char_rate", "off"));
    CHECK_OK(ctcprep_filter(cfg, m, &kept, NULL, &rejected));
    CHECK(ctcprep_manifest_size(kept) == 2 && rejected == 0);

    CHECK(ctcprep_write_metadata_csv(kept, path_in("metadata.csv")) == CTCPREP_ERR_INVALID_RECORD);
    CHECK_OK(ctcprep_split(cfg, kept, &train, &test));
    CHECK(train == 2 && test == 0);
    CHECK_OK(ctcprep_write_metadata_csv(kept, path_in("metadata.csv")));
    CHECK_OK(ctcprep_manifest_save(kept, path_in("manifest.jsonl")));
    ctcprep_manifest_free(kept);

    CHECK_OK(ctcprep_manifest_load(path_in("manifest.jsonl"), &kept));
    CHECK(ctcprep_manifest_size(kept) == 2);
    CHECK(strcmp(ctcprep_manifest_split(kept, 1), "train") == 0);
    CHECK(ctcprep_manifest_warning_count(kept) == 0);

    write_file(path_in("hyp.tsv"), "Matthew_01_001\tab\nMatthew_01_002\tx\n");
    CHECK_OK(ctcprep_eval(NULL, kept, path_in("hyp.tsv"), path_in("report.jsonl"), &table, &wer, &cer));
    CHECK(wer == 0.5);
    CHECK(cer == 1.0 / 3.0);
    CHECK(strstr(table, "WER: 0.500000") != NULL);
    ctcprep_string_free(table);

    write_file(path_in("tags.jsonl"),
               "{\"id\":\"Matthew_01_002\",\"tag\":\"High\",\"note\":\"\",\"updated_at\":\"2026-01-01T00:00:00.000Z\"}\n");
    CHECK_OK(ctcprep_apply_tags(kept, path_in("tags.jsonl")));
    CHECK(strcmp(ctcprep_manifest_tag(kept, 1), "High") == 0);
    CHECK(strcmp(ctcprep_manifest_tag(kept, 0), "Untagged") == 0);

    ctcprep_config_free(cfg);
    ctcprep_manifest_free(kept);
    ctcprep_manifest_free(m);
    ctcprep_emissions_free(em);
    ctcprep_vocab_free(vocab);
}

static void* serve(void* srv) {
    ctcprep_review_server_listen_bound((ctcprep_review_server*)srv);
    return NULL;
}

static void test_review(void) {
    ctcprep_review_server* srv = NULL;
    int port = 0;
    pthread_t thread;
    CHECK(ctcprep_review_server_open(NULL, path_in("missing.jsonl"), NULL, NULL, &srv) == CTCPREP_ERR_IO);
    CHECK_OK(ctcprep_review_server_open(NULL, path_in("manifest.jsonl"), NULL, NULL, &srv));
    CHECK_OK(ctcprep_review_server_bind(srv, "127.0.0.1", &port));
    CHECK(port > 0);
    pthread_create(&thread, NULL, serve, srv);
    usleep(50000);
    ctcprep_review_server_stop(srv);
    pthread_join(thread, NULL);
    ctcprep_review_server_free(srv);
}

int main(void) {
    snprintf(g_dir, sizeof g_dir, "/tmp/ctcprep-capi-XXXXXX");
    if (!mkdtemp(g_dir)) {
        perror("mkdtemp");
        return 2;
    }
    test_general();
    test_config();
    test_text();
    test_ctc();
    test_metrics();
    test_pipeline();
    test_review();
    {
        char cmd[600];
        snprintf(cmd, sizeof cmd, "rm -rf '%s'", g_dir);
        if (system(cmd) != 0) fprintf(stderr, "could not remove %s\n", g_dir);
    }
    printf("%d checks, %d failures\n", g_checks, g_failures);
    return g_failures == 0 ? 0 : 1;
}
