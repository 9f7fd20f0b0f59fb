// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ctcprep/config.hpp"

#include <charconv>
#include <cmath>

#include "ctcprep/error.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
    throw Error(ErrorCode::Config, "config key '" + std::string(key) + "': '" + std::string(value) + "' is not " + expected);
}

double to_real(std::string_view key, std::string_view value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) bad_value(key, value, "a number");
    return v;
}

std::optional<double> to_bound(std::string_view key, std::string_view value) {
    if (value == "off" || value == "none") return std::nullopt;
    return to_real(key, value);
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "yes" || value == "1" || value == "on") return true;
    if (value == "false" || value == "no" || value == "0" || value == "off") return false;
    bad_value(key, value, "a boolean");
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
    Int v{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
    return v;
}

std::string real_text(double v) {
    return util::format_decimal(v);
}

std::string bound_text(const std::optional<double>& v) { return v ? real_text(*v) : "off"; }

const char* bool_text(bool v) { return v ? "true" : "false"; }

}  // namespace

const std::vector<std::string>& ToolkitConfig::keys() {
    static const std::vector<std::string> k{
        "text.lowercase",       "romanize.table",      "align.wildcard",       "align.wildcard_logprob",
        "audio.frame_duration", "audio.target_dbfs",   "audio.segment_dir",    "filter.min_duration",
        "filter.max_duration",  "filter.min_word_rate", "filter.max_word_rate", "filter.min_char_rate",
        "filter.max_char_rate", "filter.require_tag_high", "split.ratio",       "split.seed",
        "split.per_chapter",    "review.port",         "review.peak_buckets",
    };
    return k;
}

void ToolkitConfig::set(std::string_view key, std::string_view value) {
    if (key == "text.lowercase") normalize.lowercase = to_bool(key, value);
    else if (key == "romanize.table") romanize_table_path = std::string(value);
    else if (key == "align.wildcard") align.wildcard = to_bool(key, value);
    else if (key == "align.wildcard_logprob") align.wildcard_logprob = to_real(key, value);
    else if (key == "audio.frame_duration") frame_duration = to_real(key, value);
    else if (key == "audio.target_dbfs") target_dbfs = to_real(key, value);
    else if (key == "audio.segment_dir") segment_dir = std::string(value);
    else if (key == "filter.min_duration") filter.min_duration = to_bound(key, value);
    else if (key == "filter.max_duration") filter.max_duration = to_bound(key, value);
    else if (key == "filter.min_word_rate") filter.min_word_rate = to_bound(key, value);
    else if (key == "filter.max_word_rate") filter.max_word_rate = to_bound(key, value);
    else if (key == "filter.min_char_rate") filter.min_char_rate = to_bound(key, value);
    else if (key == "filter.max_char_rate") filter.max_char_rate = to_bound(key, value);
    else if (key == "filter.require_tag_high") filter.require_tag_high = to_bool(key, value);
    else if (key == "split.ratio") split.ratio = to_real(key, value);
    else if (key == "split.seed") split.seed = to_int<std::uint64_t>(key, value);
    else if (key == "split.per_chapter") split.per_chapter = to_bool(key, value);
    else if (key == "review.port") review_port = to_int<int>(key, value);
    else if (key == "review.peak_buckets") peak_buckets = to_int<std::size_t>(key, value);
    else throw Error(ErrorCode::Config, "unknown config key '" + std::string(key) + "'");
}

std::string ToolkitConfig::get(std::string_view key) const {
    if (key == "text.lowercase") return bool_text(normalize.lowercase);
    if (key == "romanize.table") return romanize_table_path;
    if (key == "align.wildcard") return bool_text(align.wildcard);
    if (key == "align.wildcard_logprob") return real_text(align.wildcard_logprob);
    if (key == "audio.frame_duration") return real_text(frame_duration);
    if (key == "audio.target_dbfs") return real_text(target_dbfs);
    if (key == "audio.segment_dir") return segment_dir;
    if (key == "filter.min_duration") return bound_text(filter.min_duration);
    if (key == "filter.max_duration") return bound_text(filter.max_duration);
    if (key == "filter.min_word_rate") return bound_text(filter.min_word_rate);
    if (key == "filter.max_word_rate") return bound_text(filter.max_word_rate);
    if (key == "filter.min_char_rate") return bound_text(filter.min_char_rate);
    if (key == "filter.max_char_rate") return bound_text(filter.max_char_rate);
    if (key == "filter.require_tag_high") return bool_text(filter.require_tag_high);
    if (key == "split.ratio") return real_text(split.ratio);
    if (key == "split.seed") return std::to_string(split.seed);
    if (key == "split.per_chapter") return bool_text(split.per_chapter);
    if (key == "review.port") return std::to_string(review_port);
    if (key == "review.peak_buckets") return std::to_string(peak_buckets);
    throw Error(ErrorCode::Config, "unknown config key '" + std::string(key) + "'");
}

void ToolkitConfig::validate() const {
    filter.validate();
    if (!(frame_duration > 0.0)) throw Error(ErrorCode::Config, "audio.frame_duration must be positive");
    if (!(split.ratio > 0.0 && split.ratio < 1.0)) throw Error(ErrorCode::Config, "split.ratio must lie in (0, 1)");
    if (align.wildcard_logprob > 0.0) throw Error(ErrorCode::Config, "align.wildcard_logprob must be <= 0");
    if (review_port < 0 || review_port > 65535) throw Error(ErrorCode::Config, "review.port out of range");
    if (peak_buckets < 1) throw Error(ErrorCode::Config, "review.peak_buckets must be positive");
}

ToolkitConfig ToolkitConfig::parse(std::string_view text, const std::string& source) {
    ToolkitConfig cfg;
    const auto lines = util::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = util::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, i + 1, "expected 'key = value'");
        try {
            cfg.set(util::trim(line.substr(0, eq)), util::trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, source + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ToolkitConfig ToolkitConfig::load(const std::string& path) { return parse(util::read_file(path), path); }

RomanizeTable ToolkitConfig::romanize_table() const {
    return romanize_table_path.empty() ? RomanizeTable::defaults() : RomanizeTable::load(romanize_table_path);
}

}  // namespace ctcprep
