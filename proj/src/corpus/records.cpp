// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ctcprep/corpus.hpp"
#include "ctcprep/error.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

std::string_view to_string(QualityTag tag) noexcept {
    switch (tag) {
    case QualityTag::High: return "High";
    case QualityTag::Low: return "Low";
    case QualityTag::Fixable: return "Fixable";
    case QualityTag::Untagged: return "Untagged";
    }
    return "Untagged";
}

std::string_view to_string(Split split) noexcept {
    switch (split) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    case Split::Unassigned: return "unassigned";
    }
    return "unassigned";
}

std::optional<QualityTag> parse_quality_tag(std::string_view s) noexcept {
    for (auto t : {QualityTag::High, QualityTag::Low, QualityTag::Fixable, QualityTag::Untagged})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) noexcept {
    for (auto v : {Split::Train, Split::Test, Split::Unassigned})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::string_view to_string(FilterRule rule) noexcept {
    switch (rule) {
    case FilterRule::Duration: return "duration";
    case FilterRule::WordRate: return "word_rate";
    case FilterRule::CharRate: return "char_rate";
    case FilterRule::QualityTag: return "quality_tag";
    }
    return "unknown";
}

std::string SegmentRecord::chapter_id() const {
    const auto us = id.rfind('_');
    return us == std::string::npos ? id : id.substr(0, us);
}

SegmentRecord compute_quality_stats(SegmentRecord record) {
    if (!(record.duration > 0.0) || !std::isfinite(record.duration)) {
        throw Error(ErrorCode::InvalidRecord, "record '" + record.id + "' has non-positive duration");
    }
    record.word_count = util::split_fields(record.normalized_text).size();
    record.char_count = 0;
    for (const auto& g : grapheme_clusters(record.normalized_text)) {
        if (g != " ") ++record.char_count;
    }
    record.word_rate = static_cast<double>(record.word_count) / record.duration;
    record.char_rate = static_cast<double>(record.char_count) / record.duration;
    return record;
}

FilterRules FilterRules::none() {
    FilterRules r;
    r.min_duration = r.max_duration = std::nullopt;
    r.min_word_rate = r.max_word_rate = std::nullopt;
    r.min_char_rate = r.max_char_rate = std::nullopt;
    r.require_tag_high = false;
    return r;
}

void FilterRules::validate() const {
    auto check = [](const std::optional<double>& lo, const std::optional<double>& hi, const char* name) {
        if (lo && hi && *lo > *hi) {
            throw Error(ErrorCode::Config, std::string("filter rule ") + name + ": minimum " + util::format_decimal(*lo) +
                                               " exceeds maximum " + util::format_decimal(*hi));
        }
    };
    check(min_duration, max_duration, "duration");
    check(min_word_rate, max_word_rate, "word_rate");
    check(min_char_rate, max_char_rate, "char_rate");
}

namespace {

std::optional<std::string> range_violation(double value, const std::optional<double>& lo,
                                           const std::optional<double>& hi, std::string_view unit) {
    std::ostringstream msg;
    if (lo && value < *lo) {
        msg << value << ' ' << unit << " below minimum " << *lo;
        return msg.str();
    }
    if (hi && value > *hi) {
        msg << value << ' ' << unit << " above maximum " << *hi;
        return msg.str();
    }
    return std::nullopt;
}

}  // namespace

FilterResult filter_segments(std::span<const SegmentRecord> records, const FilterRules& rules) {
    rules.validate();
    FilterResult result;
    for (const auto& r : records) {
        std::optional<std::string> why;
        FilterRule rule = FilterRule::Duration;
        if ((why = range_violation(r.duration, rules.min_duration, rules.max_duration, "s"))) {
            rule = FilterRule::Duration;
        } else if ((why = range_violation(r.word_rate, rules.min_word_rate, rules.max_word_rate, "words/s"))) {
            rule = FilterRule::WordRate;
        } else if ((why = range_violation(r.char_rate, rules.min_char_rate, rules.max_char_rate, "chars/s"))) {
            rule = FilterRule::CharRate;
        } else if (rules.require_tag_high && r.quality_tag != QualityTag::High) {
            rule = FilterRule::QualityTag;
            why = "tag " + std::string(to_string(r.quality_tag)) + " is not High";
        }
        if (why) {
            result.rejected.push_back({r, rule, std::string(to_string(rule)) + ": " + *why});
        } else {
            result.kept.push_back(r);
        }
    }
    return result;
}

std::vector<SegmentRecord> apply_tags(std::vector<SegmentRecord> records, const std::map<std::string, QualityTag>& tags) {
    for (auto& r : records) {
        auto it = tags.find(r.id);
        r.quality_tag = it == tags.end() ? QualityTag::Untagged : it->second;
    }
    return records;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Uniform draw from [0, bound) by rejection; std::uniform_int_distribution
    // is not specified bit-for-bit across standard libraries.
    auto bounded = [&rng](std::uint64_t bound) {
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        return x % bound;
    };
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(bounded(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::vector<SegmentRecord> split_dataset(std::vector<SegmentRecord> records, const SplitOptions& options) {
    if (records.empty()) throw Error(ErrorCode::EmptyInput, "cannot split an empty dataset");
    if (!(options.ratio > 0.0 && options.ratio < 1.0)) {
        throw Error(ErrorCode::Config, "split ratio must lie strictly between 0 and 1");
    }
    if (!options.per_chapter) {
        const auto train = static_cast<std::size_t>(std::llround(static_cast<double>(records.size()) * options.ratio));
        const auto perm = seeded_permutation(records.size(), options.seed);
        for (std::size_t k = 0; k < perm.size(); ++k) records[perm[k]].split = k < train ? Split::Train : Split::Test;
        return records;
    }
    std::vector<std::string> chapters;
    for (const auto& r : records) {
        const std::string c = r.chapter_id();
        if (std::find(chapters.begin(), chapters.end(), c) == chapters.end()) chapters.push_back(c);
    }
    std::sort(chapters.begin(), chapters.end());
    const auto train = static_cast<std::size_t>(std::llround(static_cast<double>(chapters.size()) * options.ratio));
    const auto perm = seeded_permutation(chapters.size(), options.seed);
    std::map<std::string, Split> assignment;
    for (std::size_t k = 0; k < perm.size(); ++k) assignment[chapters[perm[k]]] = k < train ? Split::Train : Split::Test;
    for (auto& r : records) r.split = assignment.at(r.chapter_id());
    return records;
}

AlignmentPath synth_path(std::span<const Token> labels, std::size_t frames_per_token, Token blank) {
    if (frames_per_token < 1) throw Error(ErrorCode::InvalidArgument, "frames_per_token must be at least 1");
    AlignmentPath path;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0 && labels[i] == labels[i - 1]) path.push_back(blank);
        path.insert(path.end(), frames_per_token, labels[i]);
    }
    if (path.empty()) path.push_back(blank);
    return path;
}

LogProbMatrix synth_emissions_from_path(std::span<const Token> path, const Vocab& vocab, const SynthOptions& options) {
    const std::size_t V = vocab.size();
    if (!(options.leakage > 0.0 && options.leakage < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "leakage must lie in (0, 0.5)");
    }
    const double on = std::log1p(-options.leakage);
    const double off = std::log(options.leakage / static_cast<double>(V - 1));
    Matrix m(path.size(), V, off);
    for (std::size_t t = 0; t < path.size(); ++t) {
        if (path[t] < 0 || static_cast<std::size_t>(path[t]) >= V) {
            throw Error(ErrorCode::InvalidLabel, "path token outside vocabulary");
        }
        m(t, static_cast<std::size_t>(path[t])) = on;
    }
    return LogProbMatrix(std::move(m), options.frame_duration, kBlankIndex, vocab.tokens());
}

LogProbMatrix synth_emissions(std::string_view normalized, const Vocab& vocab, std::size_t frames_per_token,
                              const SynthOptions& options) {
    const LabelSequence labels = encode_labels(normalized, vocab);
    return synth_emissions_from_path(synth_path(labels, frames_per_token), vocab, options);
}

}  // namespace ctcprep
