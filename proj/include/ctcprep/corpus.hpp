// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctcprep/audio.hpp"
#include "ctcprep/ctc.hpp"
#include "ctcprep/textnorm.hpp"

namespace ctcprep {

enum class QualityTag { Untagged, High, Low, Fixable };
enum class Split { Unassigned, Train, Test };

std::string_view to_string(QualityTag tag) noexcept;
std::string_view to_string(Split split) noexcept;
std::optional<QualityTag> parse_quality_tag(std::string_view s) noexcept;
std::optional<Split> parse_split(std::string_view s) noexcept;

/// One manifest entry. The six leading fields are the core manifest schema;
/// the rest travel as `x_`-prefixed extensions.
struct SegmentRecord {
    double audio_start_sec = 0.0;
    std::string audio_filepath;
    double duration = 0.0;
    std::string text;
    std::string normalized_text;
    std::string uroman_tokens;

    std::string id;
    std::size_t word_count = 0;
    std::size_t char_count = 0;
    double word_rate = 0.0;
    double char_rate = 0.0;
    QualityTag quality_tag = QualityTag::Untagged;
    Split split = Split::Unassigned;
    std::string source_audio;  ///< chapter recording the segment was cut from

    /// Unrecognized fields seen on parse, as (name, raw JSON value).
    std::vector<std::pair<std::string, std::string>> extra_fields;

    /// Chapter part of the id, i.e. everything before the last '_'.
    std::string chapter_id() const;

    bool operator==(const SegmentRecord&) const = default;
};

struct ChapterPair {
    std::string chapter_id;
    std::string audio_path;
    std::string text_path;
    std::vector<std::string> verse_lines;
};

struct UnmatchedFile {
    std::string path;
    std::string reason;
};

struct PairDiscovery {
    std::vector<ChapterPair> pairs;  ///< sorted by chapter id
    std::vector<UnmatchedFile> unmatched;
};

/// Maps a source file name to its `Book_NN` key. Recognizes the audio
/// pattern `Bnn__cc_Book__*.ext`, the transcript pattern
/// `<prefix>_nnn_ABC_cc_read.txt` (three-letter book codes), and names that
/// are already canonical.
std::optional<std::string> canonical_chapter_key(std::string_view filename);

/// Matches audio (.wav, .mp3) and transcript (.txt) files by canonical key.
/// Reads transcripts; never modifies either directory.
PairDiscovery discover_pairs(const std::string& audio_dir, const std::string& text_dir);

std::vector<std::string> read_verse_lines(const std::string& text_path);

struct ChapterAlignOptions {
    AlignOptions align;
    NormalizeOptions normalize;
    RomanizeTable romanize_table = RomanizeTable::defaults();
    std::string segment_dir = "segments";
};

struct ChapterAlignment {
    std::vector<SegmentRecord> records;
    std::vector<std::string> warnings;
    Alignment alignment;
    /// Per record: [start_frame, end_frame) in the chapter emissions.
    std::vector<std::pair<std::size_t, std::size_t>> frame_spans;
};

/// Aligns the concatenated verses (joined by the word delimiter) and returns
/// one record per non-empty verse. Verse k spans from the first frame of its
/// first token to one past the last frame of its last token; delimiter
/// frames between verses belong to neither.
ChapterAlignment align_chapter(const ChapterPair& pair, const LogProbMatrix& emissions, const Vocab& vocab,
                               const ChapterAlignOptions& options = {});

/// Fills word/char counts and rates. Throws InvalidRecord when duration <= 0.
SegmentRecord compute_quality_stats(SegmentRecord record);

struct FilterRules {
    std::optional<double> min_duration = 1.0;
    std::optional<double> max_duration = 30.0;
    std::optional<double> min_word_rate = 0.4;
    std::optional<double> max_word_rate = 6.0;
    std::optional<double> min_char_rate = 2.0;
    std::optional<double> max_char_rate = 30.0;
    bool require_tag_high = false;

    static FilterRules none();
    /// Throws Config when a min exceeds its max.
    void validate() const;
};

enum class FilterRule { Duration, WordRate, CharRate, QualityTag };
std::string_view to_string(FilterRule rule) noexcept;

struct Rejection {
    SegmentRecord record;
    FilterRule rule;
    std::string reason;
};

struct FilterResult {
    std::vector<SegmentRecord> kept;
    std::vector<Rejection> rejected;
};

/// Rules are checked in the order duration, word rate, char rate, tag; a
/// rejection records the first one violated.
FilterResult filter_segments(std::span<const SegmentRecord> records, const FilterRules& rules);

/// Sets quality_tag from `tags` (by id); records without an entry become Untagged.
std::vector<SegmentRecord> apply_tags(std::vector<SegmentRecord> records, const std::map<std::string, QualityTag>& tags);

struct SplitOptions {
    double ratio = 0.8;
    std::uint64_t seed = 0;
    bool per_chapter = false;
};

/// Seeded permutation (mt19937_64 driving a Fisher-Yates shuffle with
/// rejection-sampled bounds, identical on every platform); the first
/// round(N * ratio) shuffled records become train. With per_chapter, whole
/// chapters are shuffled and the first round(C * ratio) go to train.
/// Output keeps the input order.
std::vector<SegmentRecord> split_dataset(std::vector<SegmentRecord> records, const SplitOptions& options);

/// Portable permutation of [0, n) used by split_dataset.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

std::string format_manifest(std::span<const SegmentRecord> records);
void emit_manifest(std::span<const SegmentRecord> records, const std::string& path);
/// One JSON object per line. Unknown fields are kept in extra_fields and a
/// warning is appended to `warnings` when given.
std::vector<SegmentRecord> parse_manifest(std::string_view text, const std::string& source = "<memory>",
                                          std::vector<std::string>* warnings = nullptr);
std::vector<SegmentRecord> load_manifest(const std::string& path, std::vector<std::string>* warnings = nullptr);

struct MetadataRow {
    std::string file_path;
    std::string transcription;
    std::string split;
    std::string file_name;

    bool operator==(const MetadataRow&) const = default;
};

/// Header `file_path,transcription,split,file_name`; transcription is the
/// normalized text. Throws InvalidRecord naming the first unassigned record.
std::string format_metadata_csv(std::span<const SegmentRecord> records);
void emit_metadata_csv(std::span<const SegmentRecord> records, const std::string& path);
std::vector<MetadataRow> parse_metadata_csv(std::string_view text, const std::string& source = "<memory>");

struct SynthOptions {
    /// Probability mass spread over the non-target tokens of each frame.
    double leakage = 1e-4;
    double frame_duration = kDefaultFrameDuration;
};

/// Canonical path for `labels`: each token held `frames_per_token` frames,
/// with one blank frame between adjacent repeats.
AlignmentPath synth_path(std::span<const Token> labels, std::size_t frames_per_token, Token blank = kBlankIndex);

/// Near-one-hot emissions tracing `path`.
LogProbMatrix synth_emissions_from_path(std::span<const Token> path, const Vocab& vocab, const SynthOptions& options = {});

/// Emissions for the encoded text whose greedy decode is the text itself.
LogProbMatrix synth_emissions(std::string_view normalized, const Vocab& vocab, std::size_t frames_per_token,
                              const SynthOptions& options = {});

struct SegmentCutOptions {
    double frame_duration = kDefaultFrameDuration;
    double target_dbfs = -1.0;
    bool normalize_peak = true;
};

/// Converts the chapter recording to mono 16 kHz, peak-normalizes it, and
/// writes each record's span to its audio_filepath (relative paths resolve
/// against `base_dir`). Returns the cut buffers in record order.
std::vector<AudioBuffer> cut_chapter_segments(const AudioBuffer& chapter, std::span<const SegmentRecord> records,
                                              const std::string& base_dir, const SegmentCutOptions& options = {});

/// Frame span of a record given the chapter frame grid.
std::pair<std::size_t, std::size_t> record_frame_span(const SegmentRecord& record, double frame_duration);

}  // namespace ctcprep
