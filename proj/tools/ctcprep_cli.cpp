// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links against the C interface only.

#include <signal.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ctcprep/ctcprep.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Failure {
    ctcprep_status status;
    std::string message;
};

void check(ctcprep_status s) {
    if (s != CTCPREP_OK) throw Failure{s, ctcprep_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using Config = std::unique_ptr<ctcprep_config, Deleter<ctcprep_config, ctcprep_config_free>>;
using Emissions = std::unique_ptr<ctcprep_emissions, Deleter<ctcprep_emissions, ctcprep_emissions_free>>;
using VocabHandle = std::unique_ptr<ctcprep_vocab, Deleter<ctcprep_vocab, ctcprep_vocab_free>>;
using Pairs = std::unique_ptr<ctcprep_pairs, Deleter<ctcprep_pairs, ctcprep_pairs_free>>;
using Manifest = std::unique_ptr<ctcprep_manifest, Deleter<ctcprep_manifest, ctcprep_manifest_free>>;
using Server = std::unique_ptr<ctcprep_review_server, Deleter<ctcprep_review_server, ctcprep_review_server_free>>;

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { ctcprep_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

Manifest load_manifest(const std::string& path) {
    ctcprep_manifest* m = nullptr;
    check(ctcprep_manifest_load(path.c_str(), &m));
    Manifest out(m);
    for (size_t i = 0; i < ctcprep_manifest_warning_count(m); ++i) {
        std::fprintf(stderr, "warning: %s\n", ctcprep_manifest_warning(m, i));
    }
    return out;
}

std::string config_value(const ctcprep_config* cfg, const char* key) {
    OwnedString v;
    check(ctcprep_config_get(cfg, key, &v.p));
    return v.str();
}

std::string parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    return parent.empty() ? "." : parent.string();
}

// ---- subcommands ----------------------------------------------------------

struct NormalizeArgs {
    std::string input, output, vocab_out;
};

int run_normalize(const ctcprep_config* cfg, const NormalizeArgs& a) {
    size_t n = 0;
    check(ctcprep_normalize_file(cfg, a.input.c_str(), a.output.c_str(), &n));
    std::printf("%zu lines written to %s\n", n, a.output.c_str());
    if (!a.vocab_out.empty()) {
        const char* paths[] = {a.output.c_str()};
        ctcprep_vocab* v = nullptr;
        check(ctcprep_vocab_build(cfg, paths, 1, &v));
        VocabHandle vocab(v);
        check(ctcprep_vocab_save(v, a.vocab_out.c_str()));
        std::printf("%zu tokens written to %s\n", ctcprep_vocab_size(v), a.vocab_out.c_str());
    }
    return kExitOk;
}

struct PairsArgs {
    std::string audio_dir, text_dir;
};

int run_pairs(const PairsArgs& a) {
    ctcprep_pairs* p = nullptr;
    check(ctcprep_discover_pairs(a.audio_dir.c_str(), a.text_dir.c_str(), &p));
    Pairs pairs(p);
    for (size_t i = 0; i < ctcprep_pairs_count(p); ++i) {
        std::printf("%s\t%s\t%s\n", ctcprep_pairs_chapter_id(p, i), ctcprep_pairs_audio_path(p, i),
                    ctcprep_pairs_text_path(p, i));
    }
    for (size_t i = 0; i < ctcprep_pairs_unmatched_count(p); ++i) {
        std::fprintf(stderr, "unmatched: %s (%s)\n", ctcprep_pairs_unmatched_path(p, i),
                     ctcprep_pairs_unmatched_reason(p, i));
    }
    return kExitOk;
}

struct AlignArgs {
    std::string audio, text, emissions, vocab, chapter_id, out;
    std::string audio_dir, text_dir, emissions_dir;
};

std::string chapter_key_of(const std::string& path) {
    OwnedString key;
    if (ctcprep_canonical_key(path.c_str(), &key.p) != CTCPREP_OK) return {};
    return key.str();
}

void align_one(const ctcprep_config* cfg, const std::string& chapter, const std::string& audio, const std::string& text,
               const std::string& emissions_path, const ctcprep_vocab* vocab, ctcprep_manifest* m) {
    ctcprep_emissions* e = nullptr;
    check(ctcprep_emissions_load(emissions_path.c_str(), &e));
    Emissions em(e);
    const size_t before = ctcprep_manifest_size(m);
    check(ctcprep_align_chapter(cfg, chapter.c_str(), audio.empty() ? nullptr : audio.c_str(), text.c_str(), e, vocab, m));
    std::printf("%s: %zu segments\n", chapter.c_str(), ctcprep_manifest_size(m) - before);
}

int run_align(const ctcprep_config* cfg, const AlignArgs& a) {
    ctcprep_vocab* v = nullptr;
    check(ctcprep_vocab_load(a.vocab.c_str(), &v));
    VocabHandle vocab(v);
    ctcprep_manifest* raw = nullptr;
    check(ctcprep_manifest_new(&raw));
    Manifest m(raw);

    if (!a.audio_dir.empty()) {
        ctcprep_pairs* p = nullptr;
        check(ctcprep_discover_pairs(a.audio_dir.c_str(), a.text_dir.c_str(), &p));
        Pairs pairs(p);
        for (size_t i = 0; i < ctcprep_pairs_unmatched_count(p); ++i) {
            std::fprintf(stderr, "unmatched: %s (%s)\n", ctcprep_pairs_unmatched_path(p, i),
                         ctcprep_pairs_unmatched_reason(p, i));
        }
        for (size_t i = 0; i < ctcprep_pairs_count(p); ++i) {
            const std::string chapter = ctcprep_pairs_chapter_id(p, i);
            const fs::path em_path = fs::path(a.emissions_dir) / (chapter + ".emissions");
            if (!fs::exists(em_path)) {
                std::fprintf(stderr, "warning: %s: no emissions at %s; skipped\n", chapter.c_str(),
                             em_path.string().c_str());
                continue;
            }
            align_one(cfg, chapter, ctcprep_pairs_audio_path(p, i), ctcprep_pairs_text_path(p, i), em_path.string(), v,
                      m.get());
        }
    } else {
        std::string chapter = a.chapter_id;
        if (chapter.empty()) chapter = chapter_key_of(a.text);
        if (chapter.empty() && !a.audio.empty()) chapter = chapter_key_of(a.audio);
        if (chapter.empty()) {
            throw Failure{CTCPREP_ERR_INVALID_ARGUMENT, "cannot derive a chapter id from the file names; pass --chapter-id"};
        }
        align_one(cfg, chapter, a.audio, a.text, a.emissions, v, m.get());
    }
    for (size_t i = 0; i < ctcprep_manifest_warning_count(m.get()); ++i) {
        std::fprintf(stderr, "warning: %s\n", ctcprep_manifest_warning(m.get(), i));
    }
    check(ctcprep_manifest_save(m.get(), a.out.c_str()));
    std::printf("%zu segments written to %s\n", ctcprep_manifest_size(m.get()), a.out.c_str());
    return kExitOk;
}

struct SegmentArgs {
    std::string manifest, audio, base_dir;
};

int run_segment(const ctcprep_config* cfg, const SegmentArgs& a) {
    Manifest m = load_manifest(a.manifest);
    const std::string base = a.base_dir.empty() ? parent_dir(a.manifest) : a.base_dir;
    size_t written = 0;
    check(ctcprep_segment_audio(cfg, m.get(), a.audio.empty() ? nullptr : a.audio.c_str(), base.c_str(), &written));
    std::printf("%zu segments written under %s\n", written, base.c_str());
    return kExitOk;
}

struct StatsArgs {
    std::string manifest, out;
};

int run_stats(const StatsArgs& a) {
    Manifest m = load_manifest(a.manifest);
    check(ctcprep_compute_stats(m.get()));
    const std::string out = a.out.empty() ? a.manifest : a.out;
    check(ctcprep_manifest_save(m.get(), out.c_str()));
    double total = 0.0;
    for (size_t i = 0; i < ctcprep_manifest_size(m.get()); ++i) total += ctcprep_manifest_duration(m.get(), i);
    std::printf("%zu segments, %.3f s total, stats written to %s\n", ctcprep_manifest_size(m.get()), total, out.c_str());
    return kExitOk;
}

struct FilterArgs {
    std::string manifest, out, rejected, tags;
};

int run_filter(const ctcprep_config* cfg, const FilterArgs& a) {
    Manifest m = load_manifest(a.manifest);
    if (!a.tags.empty()) check(ctcprep_apply_tags(m.get(), a.tags.c_str()));
    ctcprep_manifest* kept = nullptr;
    size_t rejected = 0;
    check(ctcprep_filter(cfg, m.get(), &kept, a.rejected.empty() ? nullptr : a.rejected.c_str(), &rejected));
    Manifest k(kept);
    check(ctcprep_manifest_save(kept, a.out.c_str()));
    std::printf("kept %zu, rejected %zu\n", ctcprep_manifest_size(kept), rejected);
    return kExitOk;
}

struct SplitArgs {
    std::string manifest, out;
    std::optional<double> ratio;
    bool per_chapter = false;
};

int run_split(ctcprep_config* cfg, const SplitArgs& a) {
    if (a.ratio) check(ctcprep_config_set(cfg, "split.ratio", std::to_string(*a.ratio).c_str()));
    if (a.per_chapter) check(ctcprep_config_set(cfg, "split.per_chapter", "true"));
    Manifest m = load_manifest(a.manifest);
    size_t train = 0, test = 0;
    check(ctcprep_split(cfg, m.get(), &train, &test));
    const std::string out = a.out.empty() ? a.manifest : a.out;
    check(ctcprep_manifest_save(m.get(), out.c_str()));
    std::printf("train %zu, test %zu (seed %s)\n", train, test, config_value(cfg, "split.seed").c_str());
    return kExitOk;
}

struct ManifestArgs {
    std::string manifest, csv, out;
};

int run_manifest(const ManifestArgs& a) {
    Manifest m = load_manifest(a.manifest);
    if (!a.out.empty()) check(ctcprep_manifest_save(m.get(), a.out.c_str()));
    if (!a.csv.empty()) check(ctcprep_write_metadata_csv(m.get(), a.csv.c_str()));
    std::printf("%zu records\n", ctcprep_manifest_size(m.get()));
    return kExitOk;
}

struct EvalArgs {
    std::string manifest, hyp, report;
};

int run_eval(const ctcprep_config* cfg, const EvalArgs& a) {
    Manifest m = load_manifest(a.manifest);
    OwnedString table;
    double wer = 0.0, cer = 0.0;
    check(ctcprep_eval(cfg, m.get(), a.hyp.c_str(), a.report.empty() ? nullptr : a.report.c_str(), &table.p, &wer, &cer));
    std::fputs(table.str().c_str(), stdout);
    return kExitOk;
}

struct ServeArgs {
    std::string manifest, tags, static_dir, host = "127.0.0.1";
    std::optional<int> port;
};

int run_serve(const ctcprep_config* cfg, const ServeArgs& a) {
    ctcprep_review_server* raw = nullptr;
    check(ctcprep_review_server_open(cfg, a.manifest.c_str(), a.tags.empty() ? nullptr : a.tags.c_str(),
                                     a.static_dir.empty() ? nullptr : a.static_dir.c_str(), &raw));
    Server server(raw);
    const int port = a.port ? *a.port : std::stoi(config_value(cfg, "review.port"));

    // Signals are consumed by sigwait below; the listener thread inherits the mask.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    sigaddset(&set, SIGUSR1);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    ctcprep_status listen_status = CTCPREP_OK;
    std::string listen_error;
    std::thread listener([&] {
        listen_status = ctcprep_review_server_listen(raw, a.host.c_str(), port);
        if (listen_status != CTCPREP_OK) listen_error = ctcprep_last_error();
        kill(getpid(), SIGUSR1);
    });
    std::printf("serving %s on http://%s:%d\n", a.manifest.c_str(), a.host.c_str(), port);
    std::fflush(stdout);
    int sig = 0;
    sigwait(&set, &sig);
    ctcprep_review_server_stop(raw);
    listener.join();
    if (listen_status != CTCPREP_OK) throw Failure{listen_status, listen_error};
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verse-level speech corpus preparation with CTC forced alignment"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ctcprep_version());
    std::string config_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "key = value settings file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "split seed (overrides split.seed)");

    NormalizeArgs norm;
    auto* normalize = app.add_subcommand("normalize", "Normalize a transcript file line by line");
    normalize->add_option("-i,--input", norm.input, "raw UTF-8 text")->required()->check(CLI::ExistingFile);
    normalize->add_option("-o,--output", norm.output, "normalized text")->required();
    normalize->add_option("--vocab", norm.vocab_out, "also write a vocabulary built from the output");

    PairsArgs pairs;
    auto* pairs_cmd = app.add_subcommand("pairs", "Match chapter recordings to transcripts");
    pairs_cmd->add_option("--audio-dir", pairs.audio_dir)->required()->check(CLI::ExistingDirectory);
    pairs_cmd->add_option("--text-dir", pairs.text_dir)->required()->check(CLI::ExistingDirectory);

    AlignArgs align;
    auto* align_cmd = app.add_subcommand("align", "Force-align chapters and write a manifest");
    align_cmd->add_option("--vocab", align.vocab, "vocabulary file")->required()->check(CLI::ExistingFile);
    align_cmd->add_option("-o,--out", align.out, "manifest to write")->required();
    auto* single_text = align_cmd->add_option("--text", align.text, "chapter transcript")->check(CLI::ExistingFile);
    auto* single_em = align_cmd->add_option("--emissions", align.emissions, "emission matrix")->check(CLI::ExistingFile);
    align_cmd->add_option("--audio", align.audio, "chapter recording");
    align_cmd->add_option("--chapter-id", align.chapter_id, "defaults to the key derived from the file names");
    auto* audio_dir = align_cmd->add_option("--audio-dir", align.audio_dir)->check(CLI::ExistingDirectory);
    auto* text_dir = align_cmd->add_option("--text-dir", align.text_dir)->check(CLI::ExistingDirectory);
    auto* em_dir = align_cmd->add_option("--emissions-dir", align.emissions_dir, "holds <chapter>.emissions")
                       ->check(CLI::ExistingDirectory);
    single_text->needs(single_em);
    single_em->needs(single_text);
    audio_dir->needs(text_dir)->needs(em_dir)->excludes(single_text);
    text_dir->needs(audio_dir);
    em_dir->needs(audio_dir);
    align_cmd->callback([&] {
        if (align.text.empty() && align.audio_dir.empty()) {
            throw CLI::ValidationError("align", "pass --text/--emissions or --audio-dir/--text-dir/--emissions-dir");
        }
    });

    SegmentArgs seg;
    auto* segment = app.add_subcommand("segment", "Cut per-segment WAV files from chapter recordings");
    segment->add_option("-m,--manifest", seg.manifest)->required()->check(CLI::ExistingFile);
    segment->add_option("--audio", seg.audio, "use this recording for every record")->check(CLI::ExistingFile);
    segment->add_option("--base-dir", seg.base_dir, "root for relative segment paths (manifest directory)");

    StatsArgs stats;
    auto* stats_cmd = app.add_subcommand("stats", "Recompute word and character rates");
    stats_cmd->add_option("-m,--manifest", stats.manifest)->required()->check(CLI::ExistingFile);
    stats_cmd->add_option("-o,--out", stats.out, "defaults to rewriting the input");

    FilterArgs filt;
    auto* filter = app.add_subcommand("filter", "Drop segments outside the configured thresholds");
    filter->add_option("-m,--manifest", filt.manifest)->required()->check(CLI::ExistingFile);
    filter->add_option("-o,--out", filt.out)->required();
    filter->add_option("--rejected", filt.rejected, "JSON lines of rejected ids and reasons");
    filter->add_option("--tags", filt.tags, "review tag log to apply first")->check(CLI::ExistingFile);

    SplitArgs spl;
    auto* split = app.add_subcommand("split", "Assign train/test splits");
    split->add_option("-m,--manifest", spl.manifest)->required()->check(CLI::ExistingFile);
    split->add_option("-o,--out", spl.out, "defaults to rewriting the input");
    split->add_option("--ratio", spl.ratio, "train fraction")->check(CLI::Range(0.0, 1.0));
    split->add_flag("--per-chapter", spl.per_chapter, "keep chapters whole");

    ManifestArgs man;
    auto* manifest = app.add_subcommand("manifest", "Validate a manifest and export metadata CSV");
    manifest->add_option("-m,--manifest", man.manifest)->required()->check(CLI::ExistingFile);
    manifest->add_option("--csv", man.csv, "metadata CSV to write");
    manifest->add_option("-o,--out", man.out, "rewrite the manifest in canonical form");

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Score hypotheses with WER and CER");
    eval->add_option("-m,--manifest", ev.manifest)->required()->check(CLI::ExistingFile);
    eval->add_option("--hyp", ev.hyp, "id<TAB>text per line")->required()->check(CLI::ExistingFile);
    eval->add_option("--report", ev.report, "machine-readable report (JSON lines)");

    ServeArgs srv;
    auto* review = app.add_subcommand("review", "Human review service");
    review->require_subcommand(1);
    auto* serve = review->add_subcommand("serve", "Serve the review API and frontend");
    serve->add_option("-m,--manifest", srv.manifest)->required()->check(CLI::ExistingFile);
    serve->add_option("--tags", srv.tags, "tag log (defaults to <manifest>.tags.jsonl)");
    serve->add_option("--static", srv.static_dir, "frontend assets")->check(CLI::ExistingDirectory);
    serve->add_option("--host", srv.host);
    serve->add_option("--port", srv.port)->check(CLI::Range(0, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        ctcprep_config* raw = nullptr;
        if (config_path.empty()) {
            check(ctcprep_config_new(&raw));
        } else {
            check(ctcprep_config_load(config_path.c_str(), &raw));
        }
        Config cfg(raw);
        if (seed) check(ctcprep_config_set(raw, "split.seed", std::to_string(*seed).c_str()));

        if (*normalize) return run_normalize(raw, norm);
        if (*pairs_cmd) return run_pairs(pairs);
        if (*align_cmd) return run_align(raw, align);
        if (*segment) return run_segment(raw, seg);
        if (*stats_cmd) return run_stats(stats);
        if (*filter) return run_filter(raw, filt);
        if (*split) return run_split(raw, spl);
        if (*manifest) return run_manifest(man);
        if (*eval) return run_eval(raw, ev);
        if (*serve) return run_serve(raw, srv);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error [%s]: %s\n", ctcprep_status_name(f.status), f.message.c_str());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitUsage;
}
