// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <set>

#include "ctcprep/corpus.hpp"
#include "ctcprep/error.hpp"
#include "json.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

using ordered_json = nlohmann::ordered_json;

namespace {

const std::set<std::string, std::less<>> kKnownFields{
    "audio_start_sec", "audio_filepath", "duration",    "text",        "normalized_text", "uroman_tokens",
    "x_id",            "x_word_count",   "x_char_count", "x_word_rate", "x_char_rate",     "x_quality_tag",
    "x_split",         "x_source_audio",
};

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& source, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(source, line, std::string("missing field '") + key + "'");
    return *it;
}

double number_field(const ordered_json& v, const char* key, const std::string& source, std::size_t line) {
    if (!v.is_number()) throw ParseError(source, line, std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

std::string string_field(const ordered_json& v, const char* key, const std::string& source, std::size_t line) {
    if (!v.is_string()) throw ParseError(source, line, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::size_t count_field(const ordered_json& v, const char* key, const std::string& source, std::size_t line) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ParseError(source, line, std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

bool needs_quoting(std::string_view s) { return s.find_first_of(",\"\r\n") != std::string_view::npos; }

std::string csv_field(std::string_view s) {
    if (!needs_quoting(s)) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_manifest(std::span<const SegmentRecord> records) {
    std::string out;
    for (const auto& r : records) {
        ordered_json j;
        j["audio_start_sec"] = r.audio_start_sec;
        j["audio_filepath"] = r.audio_filepath;
        j["duration"] = r.duration;
        j["text"] = r.text;
        j["normalized_text"] = r.normalized_text;
        j["uroman_tokens"] = r.uroman_tokens;
        j["x_id"] = r.id;
        j["x_word_count"] = r.word_count;
        j["x_char_count"] = r.char_count;
        j["x_word_rate"] = r.word_rate;
        j["x_char_rate"] = r.char_rate;
        j["x_quality_tag"] = std::string(to_string(r.quality_tag));
        j["x_split"] = std::string(to_string(r.split));
        if (!r.source_audio.empty()) j["x_source_audio"] = r.source_audio;
        for (const auto& [name, raw] : r.extra_fields) j[name] = ordered_json::parse(raw);
        out += j.dump();
        out += '\n';
    }
    return out;
}

void emit_manifest(std::span<const SegmentRecord> records, const std::string& path) {
    util::write_file(path, format_manifest(records));
}

std::vector<SegmentRecord> parse_manifest(std::string_view text, const std::string& source,
                                          std::vector<std::string>* warnings) {
    std::vector<SegmentRecord> records;
    const auto lines = util::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (util::trim(lines[i]).empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(lines[i]);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(source, line_no, "expected a JSON object");

        SegmentRecord r;
        r.audio_start_sec = number_field(require(j, "audio_start_sec", source, line_no), "audio_start_sec", source, line_no);
        r.audio_filepath = string_field(require(j, "audio_filepath", source, line_no), "audio_filepath", source, line_no);
        r.duration = number_field(require(j, "duration", source, line_no), "duration", source, line_no);
        r.text = string_field(require(j, "text", source, line_no), "text", source, line_no);
        r.normalized_text = string_field(require(j, "normalized_text", source, line_no), "normalized_text", source, line_no);
        r.uroman_tokens = string_field(require(j, "uroman_tokens", source, line_no), "uroman_tokens", source, line_no);
        if (r.audio_start_sec < 0.0) throw ParseError(source, line_no, "audio_start_sec is negative");
        if (!(r.duration > 0.0)) throw ParseError(source, line_no, "duration must be positive");

        if (auto it = j.find("x_id"); it != j.end()) {
            r.id = string_field(*it, "x_id", source, line_no);
        } else {
            r.id = std::filesystem::path(r.audio_filepath).stem().string();
        }
        if (j.contains("x_word_count") && j.contains("x_char_count") && j.contains("x_word_rate") &&
            j.contains("x_char_rate")) {
            r.word_count = count_field(j["x_word_count"], "x_word_count", source, line_no);
            r.char_count = count_field(j["x_char_count"], "x_char_count", source, line_no);
            r.word_rate = number_field(j["x_word_rate"], "x_word_rate", source, line_no);
            r.char_rate = number_field(j["x_char_rate"], "x_char_rate", source, line_no);
        } else {
            r = compute_quality_stats(std::move(r));
        }
        if (auto it = j.find("x_quality_tag"); it != j.end()) {
            auto tag = parse_quality_tag(string_field(*it, "x_quality_tag", source, line_no));
            if (!tag) throw ParseError(source, line_no, "unknown x_quality_tag value");
            r.quality_tag = *tag;
        }
        if (auto it = j.find("x_split"); it != j.end()) {
            auto split = parse_split(string_field(*it, "x_split", source, line_no));
            if (!split) throw ParseError(source, line_no, "unknown x_split value");
            r.split = *split;
        }
        if (auto it = j.find("x_source_audio"); it != j.end()) {
            r.source_audio = string_field(*it, "x_source_audio", source, line_no);
        }
        for (const auto& [key, value] : j.items()) {
            if (kKnownFields.contains(key)) continue;
            r.extra_fields.emplace_back(key, value.dump());
            if (warnings) warnings->push_back(source + ":" + std::to_string(line_no) + ": unknown field '" + key + "' preserved");
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<SegmentRecord> load_manifest(const std::string& path, std::vector<std::string>* warnings) {
    return parse_manifest(util::read_file(path), path, warnings);
}

std::string format_metadata_csv(std::span<const SegmentRecord> records) {
    std::string out = "file_path,transcription,split,file_name\n";
    for (const auto& r : records) {
        if (r.split == Split::Unassigned) {
            throw Error(ErrorCode::InvalidRecord, "record '" + r.id + "' has no split assigned");
        }
        out += csv_field(r.audio_filepath);
        out += ',';
        out += csv_field(r.normalized_text);
        out += ',';
        out += to_string(r.split);
        out += ',';
        out += csv_field(std::filesystem::path(r.audio_filepath).filename().string());
        out += '\n';
    }
    return out;
}

void emit_metadata_csv(std::span<const SegmentRecord> records, const std::string& path) {
    util::write_file(path, format_metadata_csv(records));
}

std::vector<MetadataRow> parse_metadata_csv(std::string_view text, const std::string& source) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
            rows.push_back(std::move(row));
            row.clear();
            ++line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw ParseError(source, line, "unterminated quoted field");
    if (field_started || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows[0] != std::vector<std::string>{"file_path", "transcription", "split", "file_name"}) {
        throw ParseError(source, 1, "expected header file_path,transcription,split,file_name");
    }
    std::vector<MetadataRow> out;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k].size() != 4) throw ParseError(source, k + 1, "expected 4 columns");
        out.push_back({rows[k][0], rows[k][1], rows[k][2], rows[k][3]});
    }
    return out;
}

}  // namespace ctcprep
