// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ctcprep/ctcprep.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "ctcprep/ctcprep.hpp"
#include "json.hpp"
#include "util/text_io.hpp"

using namespace ctcprep;

struct ctcprep_config {
    ToolkitConfig cfg;
};

struct ctcprep_emissions {
    LogProbMatrix em;
};

struct ctcprep_vocab {
    Vocab vocab;
};

struct ctcprep_pairs {
    PairDiscovery found;
};

struct ctcprep_manifest {
    std::vector<SegmentRecord> records;
    std::vector<std::string> warnings;
    std::vector<std::string> split_names;  // backing store for ctcprep_manifest_split
};

struct ctcprep_review_server {
    std::unique_ptr<ReviewService> service;
};

namespace {

thread_local std::string g_last_error;

ctcprep_status fail(ctcprep_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <typename Fn>
ctcprep_status guard(Fn&& fn) noexcept {
    try {
        fn();
        return CTCPREP_OK;
    } catch (const Error& e) {
        return fail(static_cast<ctcprep_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(CTCPREP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CTCPREP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CTCPREP_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* name) {
    if (!p) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const ToolkitConfig& config_or_default(const ctcprep_config* cfg) {
    static const ToolkitConfig defaults;
    return cfg ? cfg->cfg : defaults;
}

LabelSequence to_labels(const int32_t* labels, size_t n) {
    if (n > 0) require(labels, "labels");
    return n ? LabelSequence(labels, labels + n) : LabelSequence{};
}

void refresh_split_names(ctcprep_manifest* m) {
    m->split_names.clear();
    for (const auto& r : m->records) m->split_names.emplace_back(to_string(r.split));
}

}  // namespace

extern "C" {

const char* ctcprep_version(void) { return "0.3.0"; }

const char* ctcprep_last_error(void) { return g_last_error.c_str(); }

const char* ctcprep_status_name(ctcprep_status status) {
    switch (status) {
        case CTCPREP_OK: return "ok";
        case CTCPREP_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case CTCPREP_ERR_IO: return "io";
        case CTCPREP_ERR_PARSE: return "parse";
        case CTCPREP_ERR_INVALID_LABEL: return "invalid_label";
        case CTCPREP_ERR_INFEASIBLE_LABEL: return "infeasible_label";
        case CTCPREP_ERR_INCOMPATIBLE_BATCH: return "incompatible_batch";
        case CTCPREP_ERR_UNSUPPORTED_FORMAT: return "unsupported_format";
        case CTCPREP_ERR_OUT_OF_RANGE: return "out_of_range";
        case CTCPREP_ERR_CONFIG: return "config";
        case CTCPREP_ERR_EMPTY_INPUT: return "empty_input";
        case CTCPREP_ERR_INVALID_RECORD: return "invalid_record";
        case CTCPREP_ERR_NOT_FOUND: return "not_found";
        case CTCPREP_ERR_GONE: return "gone";
        case CTCPREP_ERR_VALIDATION: return "validation";
        case CTCPREP_ERR_CHAPTER_ALIGNMENT: return "chapter_alignment";
        case CTCPREP_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void ctcprep_string_free(char* s) { std::free(s); }

// ---- config ---------------------------------------------------------------

ctcprep_status ctcprep_config_new(ctcprep_config** out) {
    return guard([&] {
        require(out, "out");
        *out = new ctcprep_config{};
    });
}

ctcprep_status ctcprep_config_load(const char* path, ctcprep_config** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new ctcprep_config{ToolkitConfig::load(path)};
    });
}

ctcprep_status ctcprep_config_set(ctcprep_config* cfg, const char* key, const char* value) {
    return guard([&] {
        require(cfg, "cfg");
        require(key, "key");
        require(value, "value");
        ToolkitConfig next = cfg->cfg;
        next.set(key, value);
        next.validate();
        cfg->cfg = std::move(next);
    });
}

ctcprep_status ctcprep_config_get(const ctcprep_config* cfg, const char* key, char** value) {
    return guard([&] {
        require(key, "key");
        require(value, "value");
        *value = dup_string(config_or_default(cfg).get(key));
    });
}

void ctcprep_config_free(ctcprep_config* cfg) { delete cfg; }

// ---- text -----------------------------------------------------------------

ctcprep_status ctcprep_normalize_line(const ctcprep_config* cfg, const char* raw, char** out) {
    return guard([&] {
        require(raw, "raw");
        require(out, "out");
        *out = dup_string(normalize_line(raw, config_or_default(cfg).normalize));
    });
}

ctcprep_status ctcprep_normalize_file(const ctcprep_config* cfg, const char* in_path, const char* out_path,
                                      size_t* lines_written) {
    return guard([&] {
        require(in_path, "in_path");
        require(out_path, "out_path");
        const std::string text = util::read_file(in_path);
        std::vector<std::string> lines;
        for (auto l : util::split_lines(text)) lines.emplace_back(l);
        const auto norm = normalize_corpus(lines, config_or_default(cfg).normalize);
        std::string body;
        for (const auto& l : norm) body += l + "\n";
        util::write_file(out_path, body);
        if (lines_written) *lines_written = norm.size();
    });
}

ctcprep_status ctcprep_romanize(const ctcprep_config* cfg, const char* normalized, char** out) {
    return guard([&] {
        require(normalized, "normalized");
        require(out, "out");
        *out = dup_string(romanize(normalized, config_or_default(cfg).romanize_table()));
    });
}

// ---- vocab ----------------------------------------------------------------

ctcprep_status ctcprep_vocab_load(const char* path, ctcprep_vocab** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new ctcprep_vocab{Vocab::load(path)};
    });
}

ctcprep_status ctcprep_vocab_build(const ctcprep_config* cfg, const char* const* text_paths, size_t n_paths,
                                   ctcprep_vocab** out) {
    return guard([&] {
        require(out, "out");
        if (n_paths > 0) require(text_paths, "text_paths");
        std::vector<std::string> corpus;
        for (size_t i = 0; i < n_paths; ++i) {
            require(text_paths[i], "text path");
            const std::string text = util::read_file(text_paths[i]);
            for (auto l : util::split_lines(text)) {
                std::string n = normalize_line(l, config_or_default(cfg).normalize);
                if (!n.empty()) corpus.push_back(std::move(n));
            }
        }
        *out = new ctcprep_vocab{build_vocab(corpus)};
    });
}

ctcprep_status ctcprep_vocab_save(const ctcprep_vocab* vocab, const char* path) {
    return guard([&] {
        require(vocab, "vocab");
        require(path, "path");
        vocab->vocab.save(path);
    });
}

size_t ctcprep_vocab_size(const ctcprep_vocab* vocab) { return vocab ? vocab->vocab.size() : 0; }

ctcprep_status ctcprep_vocab_encode(const ctcprep_vocab* vocab, const char* normalized, int32_t* labels,
                                    size_t capacity, size_t* length) {
    return guard([&] {
        require(vocab, "vocab");
        require(normalized, "normalized");
        require(length, "length");
        if (capacity > 0) require(labels, "labels");
        const LabelSequence encoded = encode_labels(normalized, vocab->vocab);
        *length = encoded.size();
        std::copy_n(encoded.begin(), std::min(capacity, encoded.size()), labels);
    });
}

ctcprep_status ctcprep_vocab_decode(const ctcprep_vocab* vocab, const int32_t* labels, size_t n, char** out) {
    return guard([&] {
        require(vocab, "vocab");
        require(out, "out");
        const LabelSequence seq = to_labels(labels, n);
        validate_labels(seq, vocab->vocab.size(), kBlankIndex);
        *out = dup_string(decode_labels(seq, vocab->vocab));
    });
}

void ctcprep_vocab_free(ctcprep_vocab* vocab) { delete vocab; }

// ---- emissions / CTC ------------------------------------------------------

ctcprep_status ctcprep_emissions_load(const char* path, ctcprep_emissions** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new ctcprep_emissions{load_emissions(path)};
    });
}

ctcprep_status ctcprep_emissions_synthesize(const ctcprep_vocab* vocab, const char* normalized,
                                            size_t frames_per_token, double frame_duration, ctcprep_emissions** out) {
    return guard([&] {
        require(vocab, "vocab");
        require(normalized, "normalized");
        require(out, "out");
        if (frames_per_token == 0) throw Error(ErrorCode::InvalidArgument, "frames_per_token must be positive");
        SynthOptions opts;
        opts.frame_duration = frame_duration;
        *out = new ctcprep_emissions{synth_emissions(normalized, vocab->vocab, frames_per_token, opts)};
    });
}

ctcprep_status ctcprep_emissions_save(const ctcprep_emissions* em, const char* path) {
    return guard([&] {
        require(em, "em");
        require(path, "path");
        save_emissions(em->em, path);
    });
}

size_t ctcprep_emissions_frames(const ctcprep_emissions* em) { return em ? em->em.num_frames() : 0; }
size_t ctcprep_emissions_vocab_size(const ctcprep_emissions* em) { return em ? em->em.vocab_size() : 0; }
double ctcprep_emissions_frame_duration(const ctcprep_emissions* em) { return em ? em->em.frame_duration() : 0.0; }
void ctcprep_emissions_free(ctcprep_emissions* em) { delete em; }

ctcprep_status ctcprep_ctc_log_likelihood(const ctcprep_emissions* em, const int32_t* labels, size_t n, double* out) {
    return guard([&] {
        require(em, "em");
        require(out, "out");
        *out = ctc_log_likelihood(em->em, to_labels(labels, n));
    });
}

ctcprep_status ctcprep_ctc_loss(const ctcprep_emissions* em, const int32_t* labels, size_t n, double* out) {
    return guard([&] {
        require(em, "em");
        require(out, "out");
        *out = ctc_loss(em->em, to_labels(labels, n));
    });
}

ctcprep_status ctcprep_greedy_decode(const ctcprep_emissions* em, int32_t* labels, size_t capacity, size_t* length) {
    return guard([&] {
        require(em, "em");
        require(length, "length");
        if (capacity > 0) require(labels, "labels");
        const LabelSequence decoded = greedy_decode(em->em);
        *length = decoded.size();
        std::copy_n(decoded.begin(), std::min(capacity, decoded.size()), labels);
    });
}

ctcprep_status ctcprep_forced_align(const ctcprep_emissions* em, const int32_t* labels, size_t n, int wildcard,
                                    double wildcard_logprob, ctcprep_token_span* spans, double* score) {
    return guard([&] {
        require(em, "em");
        if (n > 0) require(spans, "spans");
        AlignOptions opts;
        opts.wildcard = wildcard != 0;
        if (!std::isnan(wildcard_logprob)) opts.wildcard_logprob = wildcard_logprob;
        const Alignment a = forced_align(em->em, to_labels(labels, n), opts);
        for (size_t i = 0; i < a.spans.size(); ++i) {
            spans[i] = {a.spans[i].token, a.spans[i].start_frame, a.spans[i].end_frame, a.spans[i].score};
        }
        if (score) *score = a.score;
    });
}

// ---- pairs ----------------------------------------------------------------

ctcprep_status ctcprep_canonical_key(const char* filename, char** out) {
    return guard([&] {
        require(filename, "filename");
        require(out, "out");
        auto key = canonical_chapter_key(std::filesystem::path(filename).filename().string());
        if (!key) throw Error(ErrorCode::NotFound, std::string("no chapter key in '") + filename + "'");
        *out = dup_string(*key);
    });
}

ctcprep_status ctcprep_discover_pairs(const char* audio_dir, const char* text_dir, ctcprep_pairs** out) {
    return guard([&] {
        require(audio_dir, "audio_dir");
        require(text_dir, "text_dir");
        require(out, "out");
        *out = new ctcprep_pairs{discover_pairs(audio_dir, text_dir)};
    });
}

size_t ctcprep_pairs_count(const ctcprep_pairs* p) { return p ? p->found.pairs.size() : 0; }

const char* ctcprep_pairs_chapter_id(const ctcprep_pairs* p, size_t i) {
    return p && i < p->found.pairs.size() ? p->found.pairs[i].chapter_id.c_str() : nullptr;
}

const char* ctcprep_pairs_audio_path(const ctcprep_pairs* p, size_t i) {
    return p && i < p->found.pairs.size() ? p->found.pairs[i].audio_path.c_str() : nullptr;
}

const char* ctcprep_pairs_text_path(const ctcprep_pairs* p, size_t i) {
    return p && i < p->found.pairs.size() ? p->found.pairs[i].text_path.c_str() : nullptr;
}

size_t ctcprep_pairs_unmatched_count(const ctcprep_pairs* p) { return p ? p->found.unmatched.size() : 0; }

const char* ctcprep_pairs_unmatched_path(const ctcprep_pairs* p, size_t i) {
    return p && i < p->found.unmatched.size() ? p->found.unmatched[i].path.c_str() : nullptr;
}

const char* ctcprep_pairs_unmatched_reason(const ctcprep_pairs* p, size_t i) {
    return p && i < p->found.unmatched.size() ? p->found.unmatched[i].reason.c_str() : nullptr;
}

void ctcprep_pairs_free(ctcprep_pairs* p) { delete p; }

// ---- manifest -------------------------------------------------------------

ctcprep_status ctcprep_manifest_new(ctcprep_manifest** out) {
    return guard([&] {
        require(out, "out");
        *out = new ctcprep_manifest{};
    });
}

ctcprep_status ctcprep_manifest_load(const char* path, ctcprep_manifest** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        auto m = std::make_unique<ctcprep_manifest>();
        m->records = load_manifest(path, &m->warnings);
        refresh_split_names(m.get());
        *out = m.release();
    });
}

ctcprep_status ctcprep_manifest_save(const ctcprep_manifest* m, const char* path) {
    return guard([&] {
        require(m, "manifest");
        require(path, "path");
        emit_manifest(m->records, path);
    });
}

size_t ctcprep_manifest_size(const ctcprep_manifest* m) { return m ? m->records.size() : 0; }

const char* ctcprep_manifest_id(const ctcprep_manifest* m, size_t i) {
    return m && i < m->records.size() ? m->records[i].id.c_str() : nullptr;
}

const char* ctcprep_manifest_split(const ctcprep_manifest* m, size_t i) {
    return m && i < m->split_names.size() ? m->split_names[i].c_str() : nullptr;
}

const char* ctcprep_manifest_tag(const ctcprep_manifest* m, size_t i) {
    // to_string views static literals, so the pointer outlives the call.
    return m && i < m->records.size() ? to_string(m->records[i].quality_tag).data() : nullptr;
}

double ctcprep_manifest_duration(const ctcprep_manifest* m, size_t i) {
    return m && i < m->records.size() ? m->records[i].duration : std::nan("");
}

size_t ctcprep_manifest_warning_count(const ctcprep_manifest* m) { return m ? m->warnings.size() : 0; }

const char* ctcprep_manifest_warning(const ctcprep_manifest* m, size_t i) {
    return m && i < m->warnings.size() ? m->warnings[i].c_str() : nullptr;
}

void ctcprep_manifest_free(ctcprep_manifest* m) { delete m; }

ctcprep_status ctcprep_align_chapter(const ctcprep_config* cfg, const char* chapter_id, const char* audio_path,
                                     const char* text_path, const ctcprep_emissions* em, const ctcprep_vocab* vocab,
                                     ctcprep_manifest* m) {
    return guard([&] {
        require(chapter_id, "chapter_id");
        require(text_path, "text_path");
        require(em, "em");
        require(vocab, "vocab");
        require(m, "manifest");
        const ToolkitConfig& c = config_or_default(cfg);
        ChapterPair pair{chapter_id, audio_path ? audio_path : "", text_path, read_verse_lines(text_path)};
        ChapterAlignOptions opts;
        opts.align = c.align;
        opts.normalize = c.normalize;
        opts.romanize_table = c.romanize_table();
        opts.segment_dir = c.segment_dir;
        ChapterAlignment result = align_chapter(pair, em->em, vocab->vocab, opts);
        m->records.insert(m->records.end(), std::make_move_iterator(result.records.begin()),
                          std::make_move_iterator(result.records.end()));
        m->warnings.insert(m->warnings.end(), result.warnings.begin(), result.warnings.end());
        refresh_split_names(m);
    });
}

ctcprep_status ctcprep_segment_audio(const ctcprep_config* cfg, const ctcprep_manifest* m, const char* audio_path,
                                     const char* base_dir, size_t* written) {
    return guard([&] {
        require(m, "manifest");
        const ToolkitConfig& c = config_or_default(cfg);
        SegmentCutOptions opts;
        opts.frame_duration = c.frame_duration;
        opts.target_dbfs = c.target_dbfs;
        const std::string base = base_dir ? base_dir : ".";

        // Group by recording, keeping manifest order inside each group.
        std::map<std::string, std::vector<SegmentRecord>> groups;
        for (const auto& r : m->records) {
            std::string src = audio_path ? audio_path : r.source_audio;
            if (src.empty()) {
                throw Error(ErrorCode::InvalidRecord, "record '" + r.id + "' has no source recording");
            }
            groups[src].push_back(r);
        }
        size_t count = 0;
        for (const auto& [src, records] : groups) {
            std::filesystem::path p(src);
            if (p.is_relative() && !std::filesystem::exists(p)) p = std::filesystem::path(base) / p;
            count += cut_chapter_segments(load_wav(p.string()), records, base, opts).size();
        }
        if (written) *written = count;
    });
}

ctcprep_status ctcprep_compute_stats(ctcprep_manifest* m) {
    return guard([&] {
        require(m, "manifest");
        std::vector<SegmentRecord> next;
        next.reserve(m->records.size());
        for (const auto& r : m->records) next.push_back(compute_quality_stats(r));
        m->records = std::move(next);
    });
}

ctcprep_status ctcprep_apply_tags(ctcprep_manifest* m, const char* tags_path) {
    return guard([&] {
        require(m, "manifest");
        require(tags_path, "tags_path");
        m->records = apply_tags(std::move(m->records), load_tags(tags_path));
    });
}

ctcprep_status ctcprep_filter(const ctcprep_config* cfg, const ctcprep_manifest* m, ctcprep_manifest** kept,
                              const char* rejected_path, size_t* rejected_count) {
    return guard([&] {
        require(m, "manifest");
        require(kept, "kept");
        FilterResult result = filter_segments(m->records, config_or_default(cfg).filter);
        if (rejected_path) {
            std::string body;
            for (const auto& rej : result.rejected) {
                nlohmann::ordered_json j;
                j["id"] = rej.record.id;
                j["rule"] = std::string(to_string(rej.rule));
                j["reason"] = rej.reason;
                body += j.dump() + "\n";
            }
            util::write_file(rejected_path, body);
        }
        if (rejected_count) *rejected_count = result.rejected.size();
        auto out = std::make_unique<ctcprep_manifest>();
        out->records = std::move(result.kept);
        refresh_split_names(out.get());
        *kept = out.release();
    });
}

ctcprep_status ctcprep_split(const ctcprep_config* cfg, ctcprep_manifest* m, size_t* train, size_t* test) {
    return guard([&] {
        require(m, "manifest");
        m->records = split_dataset(std::move(m->records), config_or_default(cfg).split);
        refresh_split_names(m);
        size_t tr = 0, te = 0;
        for (const auto& r : m->records) (r.split == Split::Train ? tr : te) += 1;
        if (train) *train = tr;
        if (test) *test = te;
    });
}

ctcprep_status ctcprep_write_metadata_csv(const ctcprep_manifest* m, const char* path) {
    return guard([&] {
        require(m, "manifest");
        require(path, "path");
        emit_metadata_csv(m->records, path);
    });
}

// ---- eval -----------------------------------------------------------------

double ctcprep_wer(const char* reference, const char* hypothesis) {
    if (!reference || !hypothesis) return std::nan("");
    try {
        return wer(reference, hypothesis);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return std::nan("");
    }
}

double ctcprep_cer(const char* reference, const char* hypothesis) {
    if (!reference || !hypothesis) return std::nan("");
    try {
        return cer(reference, hypothesis);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return std::nan("");
    }
}

ctcprep_status ctcprep_eval(const ctcprep_config* cfg, const ctcprep_manifest* m, const char* hyp_path,
                            const char* report_path, char** table, double* wer_out, double* cer_out) {
    return guard([&] {
        require(m, "manifest");
        require(hyp_path, "hyp_path");
        const EvalReport report = eval_report(m->records, load_hypotheses(hyp_path), config_or_default(cfg).normalize);
        if (report_path) util::write_file(report_path, format_report_jsonl(report));
        if (table) *table = dup_string(format_report_table(report));
        if (wer_out) *wer_out = report.corpus_wer();
        if (cer_out) *cer_out = report.corpus_cer();
    });
}

// ---- review ---------------------------------------------------------------

ctcprep_status ctcprep_review_server_open(const ctcprep_config* cfg, const char* manifest_path, const char* tags_path,
                                          const char* static_dir, ctcprep_review_server** out) {
    return guard([&] {
        require(manifest_path, "manifest_path");
        require(out, "out");
        ReviewOptions opts;
        opts.static_dir = static_dir ? static_dir : "";
        opts.peak_buckets = config_or_default(cfg).peak_buckets;
        std::string tags = tags_path ? std::string(tags_path) : std::string(manifest_path) + ".tags.jsonl";
        *out = new ctcprep_review_server{ReviewService::open(manifest_path, tags, opts)};
    });
}

ctcprep_status ctcprep_review_server_listen(ctcprep_review_server* srv, const char* host, int port) {
    return guard([&] {
        require(srv, "server");
        const std::string h = host ? host : "127.0.0.1";
        if (!srv->service->listen(h, port)) {
            throw Error(ErrorCode::Io, "cannot listen on " + h + ":" + std::to_string(port));
        }
    });
}

ctcprep_status ctcprep_review_server_bind(ctcprep_review_server* srv, const char* host, int* port) {
    return guard([&] {
        require(srv, "server");
        require(port, "port");
        const int p = srv->service->bind_any_port(host ? host : "127.0.0.1");
        if (p <= 0) throw Error(ErrorCode::Io, "cannot bind an ephemeral port");
        *port = p;
    });
}

ctcprep_status ctcprep_review_server_listen_bound(ctcprep_review_server* srv) {
    return guard([&] {
        require(srv, "server");
        if (!srv->service->listen_after_bind()) throw Error(ErrorCode::Io, "server stopped with an error");
    });
}

void ctcprep_review_server_stop(ctcprep_review_server* srv) {
    if (srv) srv->service->stop();
}

void ctcprep_review_server_free(ctcprep_review_server* srv) {
    if (!srv) return;
    srv->service->stop();
    delete srv;
}

}  // extern "C"
