// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <regex>

#include "ctcprep/corpus.hpp"
#include "ctcprep/error.hpp"
#include "util/text_io.hpp"

namespace fs = std::filesystem;

namespace ctcprep {

namespace {

struct Book {
    std::string_view code;
    std::string_view name;
};

// New Testament, USFM book codes.
constexpr std::array<Book, 27> kBooks{{
    {"MAT", "Matthew"},        {"MRK", "Mark"},           {"LUK", "Luke"},
    {"JHN", "John"},           {"ACT", "Acts"},           {"ROM", "Romans"},
    {"1CO", "1Corinthians"},   {"2CO", "2Corinthians"},   {"GAL", "Galatians"},
    {"EPH", "Ephesians"},      {"PHP", "Philippians"},    {"COL", "Colossians"},
    {"1TH", "1Thessalonians"}, {"2TH", "2Thessalonians"}, {"1TI", "1Timothy"},
    {"2TI", "2Timothy"},       {"TIT", "Titus"},          {"PHM", "Philemon"},
    {"HEB", "Hebrews"},        {"JAS", "James"},          {"1PE", "1Peter"},
    {"2PE", "2Peter"},         {"1JN", "1John"},          {"2JN", "2John"},
    {"3JN", "3John"},          {"JUD", "Jude"},           {"REV", "Revelation"},
}};

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string book_from_code(std::string_view code) {
    const std::string u = upper(code);
    for (const auto& b : kBooks)
        if (b.code == u) return std::string(b.name);
    return u;
}

std::string book_from_name(std::string_view name) {
    const std::string l = lower(name);
    for (const auto& b : kBooks)
        if (lower(b.name) == l) return std::string(b.name);
    return std::string(name);
}

std::string chapter_number(const std::string& digits) {
    const int n = std::stoi(digits);
    std::string s = std::to_string(n);
    if (s.size() < 2) s.insert(0, 2 - s.size(), '0');
    return s;
}

std::string extension_of(std::string_view filename) {
    const auto dot = filename.rfind('.');
    return dot == std::string_view::npos ? std::string() : lower(filename.substr(dot + 1));
}

std::vector<fs::path> list_files(const std::string& dir) {
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot read directory '" + dir + "': " + ec.message());
    std::vector<fs::path> files;
    for (const auto& entry : it) {
        if (entry.is_regular_file(ec)) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

std::optional<std::string> canonical_chapter_key(std::string_view filename) {
    static const std::regex audio_re(R"(^B\d+_+(\d+)_+([A-Za-z0-9]+)_+.*\.(mp3|wav)$)", std::regex::icase);
    static const std::regex text_re(R"(^[A-Za-z0-9]+_\d+_([0-9A-Za-z]{3})_(\d+)_read\.txt$)", std::regex::icase);
    static const std::regex canonical_re(R"(^([A-Za-z0-9]+)_(\d+)\.(mp3|wav|txt)$)", std::regex::icase);
    const std::string name(filename);
    std::smatch m;
    if (std::regex_match(name, m, audio_re)) return book_from_name(m[2].str()) + "_" + chapter_number(m[1].str());
    if (std::regex_match(name, m, text_re)) return book_from_code(m[1].str()) + "_" + chapter_number(m[2].str());
    if (std::regex_match(name, m, canonical_re)) return book_from_name(m[1].str()) + "_" + chapter_number(m[2].str());
    return std::nullopt;
}

std::vector<std::string> read_verse_lines(const std::string& text_path) {
    const std::string text = util::read_file(text_path);
    std::vector<std::string> lines;
    for (auto line : util::split_lines(text)) {
        auto t = util::trim(line);
        if (!t.empty()) lines.emplace_back(t);
    }
    return lines;
}

PairDiscovery discover_pairs(const std::string& audio_dir, const std::string& text_dir) {
    PairDiscovery result;
    std::map<std::string, std::string> audio_by_key, text_by_key;

    auto index = [&](const std::string& dir, std::map<std::string, std::string>& by_key, bool audio) {
        for (const auto& path : list_files(dir)) {
            const std::string name = path.filename().string();
            const std::string ext = extension_of(name);
            const bool wanted = audio ? (ext == "wav" || ext == "mp3") : ext == "txt";
            if (!wanted) {
                result.unmatched.push_back({path.string(), audio ? "not an audio file" : "not a transcript file"});
                continue;
            }
            auto key = canonical_chapter_key(name);
            if (!key) {
                result.unmatched.push_back({path.string(), "unrecognized file name"});
                continue;
            }
            auto [it, inserted] = by_key.emplace(*key, path.string());
            if (!inserted) result.unmatched.push_back({path.string(), "duplicate of " + it->second});
        }
    };
    index(audio_dir, audio_by_key, true);
    index(text_dir, text_by_key, false);

    for (const auto& [key, audio] : audio_by_key) {
        auto t = text_by_key.find(key);
        if (t == text_by_key.end()) {
            result.unmatched.push_back({audio, "no transcript for " + key});
            continue;
        }
        ChapterPair pair{key, audio, t->second, read_verse_lines(t->second)};
        if (normalize_corpus(pair.verse_lines).empty()) {
            result.unmatched.push_back({t->second, "transcript has no verses after normalization"});
            continue;
        }
        result.pairs.push_back(std::move(pair));
    }
    for (const auto& [key, text] : text_by_key) {
        if (!audio_by_key.contains(key)) result.unmatched.push_back({text, "no audio for " + key});
    }
    return result;
}

}  // namespace ctcprep
