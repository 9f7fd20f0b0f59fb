// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "ctcprep/corpus.hpp"
#include "ctcprep/error.hpp"

namespace fs = std::filesystem;

namespace ctcprep {

namespace {

std::string verse_id(const std::string& chapter, std::size_t verse_number) {
    std::ostringstream s;
    s << chapter << '_' << std::setw(3) << std::setfill('0') << verse_number;
    return s.str();
}

struct PendingVerse {
    std::size_t line_index;
    std::string normalized;
    std::size_t first_label;
    std::size_t label_count;
};

}  // namespace

ChapterAlignment align_chapter(const ChapterPair& pair, const LogProbMatrix& emissions, const Vocab& vocab,
                               const ChapterAlignOptions& options) {
    if (emissions.vocab_size() != vocab.size()) {
        throw Error(ErrorCode::Validation, pair.chapter_id + ": emission vocabulary size " +
                                               std::to_string(emissions.vocab_size()) + " differs from vocab size " +
                                               std::to_string(vocab.size()));
    }
    if (!emissions.vocabulary().empty() && emissions.vocabulary() != vocab.tokens()) {
        throw Error(ErrorCode::Validation, pair.chapter_id + ": emission vocabulary does not match the vocab file");
    }
    if (emissions.blank() != kBlankIndex) {
        throw Error(ErrorCode::Validation, pair.chapter_id + ": emissions must use index 0 for <pad>");
    }

    ChapterAlignment out;
    std::vector<PendingVerse> verses;
    LabelSequence labels;
    for (std::size_t i = 0; i < pair.verse_lines.size(); ++i) {
        std::string norm = normalize_line(pair.verse_lines[i], options.normalize);
        if (norm.empty()) {
            out.warnings.push_back(pair.chapter_id + ": line " + std::to_string(i + 1) +
                                   " is empty after normalization; skipped");
            continue;
        }
        if (!labels.empty()) labels.push_back(kDelimiterIndex);
        const LabelSequence verse_labels = encode_labels(norm, vocab);
        verses.push_back({i, std::move(norm), labels.size(), verse_labels.size()});
        labels.insert(labels.end(), verse_labels.begin(), verse_labels.end());
    }
    if (verses.empty()) {
        throw Error(ErrorCode::ChapterAlignment, pair.chapter_id + ": no verses left after normalization");
    }

    try {
        out.alignment = forced_align(emissions, labels, options.align);
    } catch (const Error& e) {
        throw Error(ErrorCode::ChapterAlignment, "chapter " + pair.chapter_id + ": " + e.what());
    }

    const double fd = emissions.frame_duration();
    for (const auto& v : verses) {
        const TokenSpan& first = out.alignment.spans[v.first_label];
        const TokenSpan& last = out.alignment.spans[v.first_label + v.label_count - 1];
        SegmentRecord r;
        r.id = verse_id(pair.chapter_id, v.line_index + 1);
        r.audio_filepath = (fs::path(options.segment_dir) / (r.id + ".wav")).string();
        r.audio_start_sec = static_cast<double>(first.start_frame) * fd;
        r.duration = static_cast<double>(last.end_frame - first.start_frame) * fd;
        r.text = pair.verse_lines[v.line_index];
        r.normalized_text = v.normalized;
        r.uroman_tokens = romanize(v.normalized, options.romanize_table);
        r.source_audio = pair.audio_path;
        out.records.push_back(compute_quality_stats(std::move(r)));
        out.frame_spans.emplace_back(first.start_frame, last.end_frame);
    }
    return out;
}

std::pair<std::size_t, std::size_t> record_frame_span(const SegmentRecord& record, double frame_duration) {
    if (!(frame_duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "frame duration must be positive");
    if (record.audio_start_sec < 0.0 || !(record.duration > 0.0)) {
        throw Error(ErrorCode::InvalidRecord, "record '" + record.id + "' has an invalid time span");
    }
    const auto start = static_cast<std::size_t>(std::llround(record.audio_start_sec / frame_duration));
    const auto length = static_cast<std::size_t>(std::llround(record.duration / frame_duration));
    return {start, start + std::max<std::size_t>(length, 1)};
}

std::vector<AudioBuffer> cut_chapter_segments(const AudioBuffer& chapter, std::span<const SegmentRecord> records,
                                              const std::string& base_dir, const SegmentCutOptions& options) {
    AudioBuffer prepared = to_mono_16k(chapter);
    if (options.normalize_peak) prepared = peak_normalize(prepared, options.target_dbfs);
    std::vector<AudioBuffer> cuts;
    cuts.reserve(records.size());
    for (const auto& r : records) {
        const auto [start, end] = record_frame_span(r, options.frame_duration);
        AudioBuffer cut = cut_segment(prepared, start, end, options.frame_duration);
        if (!r.audio_filepath.empty()) {
            fs::path target(r.audio_filepath);
            if (target.is_relative()) target = fs::path(base_dir) / target;
            std::error_code ec;
            fs::create_directories(target.parent_path(), ec);
            save_wav(cut, target.string());
        }
        cuts.push_back(std::move(cut));
    }
    return cuts;
}

}  // namespace ctcprep
