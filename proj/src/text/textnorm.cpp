// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ctcprep/textnorm.hpp"

#include <set>
#include <unordered_set>

#include "ctcprep/error.hpp"
#include "text/unicode.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

std::string normalize_line(std::string_view raw, const NormalizeOptions& options) {
    const std::string cased = options.lowercase ? unicode::to_lower(raw) : std::string(raw);
    std::u32string kept;
    kept.reserve(cased.size());
    bool pending_space = false;
    for (char32_t cp : unicode::decode(cased)) {
        if (unicode::is_whitespace(cp)) {
            pending_space = !kept.empty();
            continue;
        }
        if (unicode::is_punctuation(cp) || unicode::is_decimal_digit(cp)) continue;
        if (pending_space) kept.push_back(U' ');
        pending_space = false;
        kept.push_back(cp);
    }
    return unicode::normalize(unicode::encode(kept), unicode::Form::Nfc);
}

std::vector<std::string> normalize_corpus(std::span<const std::string> lines, const NormalizeOptions& options) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& line : lines) {
        std::string norm = normalize_line(line, options);
        if (norm.empty()) continue;
        if (!seen.insert(norm).second) continue;
        out.push_back(std::move(norm));
    }
    return out;
}

std::vector<std::string> grapheme_clusters(std::string_view text) { return unicode::graphemes(text); }

RomanizeTable RomanizeTable::defaults() {
    RomanizeTable t;
    t.set("ɛ", "e");
    t.set("ɔ", "o");
    t.set("ə", "e");
    t.set("ŋ", "n");
    t.set("ɲ", "n");
    t.set("ɓ", "b");
    t.set("ɗ", "d");
    t.set("ƙ", "k");
    t.set("ƴ", "y");
    t.set("ß", "ss");
    t.set("æ", "ae");
    t.set("œ", "oe");
    t.set("ø", "o");
    t.set("đ", "d");
    t.set("ł", "l");
    t.set("ı", "i");
    return t;
}

RomanizeTable RomanizeTable::parse(std::string_view text, const std::string& source) {
    RomanizeTable t;
    const auto lines = util::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (util::trim(line).empty() || util::trim(line).front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw ParseError(source, i + 1, "expected 'from<TAB>to'");
        std::string from(line.substr(0, tab));
        std::string to(line.substr(tab + 1));
        if (unicode::decode(from).size() != 1) {
            throw ParseError(source, i + 1, "'from' must be a single character");
        }
        t.set(std::move(from), std::move(to));
    }
    return t;
}

RomanizeTable RomanizeTable::load(const std::string& path) { return parse(util::read_file(path), path); }

void RomanizeTable::set(std::string from, std::string to) { entries_[std::move(from)] = std::move(to); }

const std::string* RomanizeTable::find(std::string_view from) const {
    auto it = entries_.find(from);
    return it == entries_.end() ? nullptr : &it->second;
}

std::string romanize(std::string_view normalized, const RomanizeTable& table) {
    std::vector<std::string> tokens;
    auto emit = [&](char32_t c) {
        if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) {
            tokens.emplace_back(1, static_cast<char>(c));
        }
    };
    const std::string decomposed = unicode::normalize(normalized, unicode::Form::Nfd);
    for (char32_t cp : unicode::decode(decomposed)) {
        if (unicode::is_combining_mark(cp)) continue;
        if (cp == U' ' || unicode::is_whitespace(cp)) {
            if (!tokens.empty() && tokens.back() != kWordDelimiter) tokens.emplace_back(kWordDelimiter);
            continue;
        }
        if (cp < 0x80) {
            emit(cp);
        } else if (const std::string* mapped = table.find(unicode::encode(cp))) {
            for (char32_t m : unicode::decode(*mapped)) {
                if (m == U' ') continue;
                if (m < 0x80) {
                    emit(m);
                } else {
                    tokens.push_back(unicode::encode(m));
                }
            }
        }
    }
    while (!tokens.empty() && tokens.back() == kWordDelimiter) tokens.pop_back();
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.size() < 3 || tokens_[0] != kBlankSymbol || tokens_[1] != kUnknownSymbol ||
        tokens_[2] != kWordDelimiter) {
        throw Error(ErrorCode::Validation, "vocabulary must start with <pad>, <unk>, |");
    }
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (tokens_[i].empty()) throw Error(ErrorCode::Validation, "empty vocabulary token at index " + std::to_string(i));
        if (!index_.emplace(tokens_[i], static_cast<Token>(i)).second) {
            throw Error(ErrorCode::Validation, "duplicate vocabulary token '" + tokens_[i] + "'");
        }
    }
}

Vocab Vocab::parse(std::string_view text, const std::string& source) {
    auto lines = util::split_lines(text);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) throw ParseError(source, i + 1, "empty vocabulary line");
        tokens.emplace_back(lines[i]);
    }
    try {
        return Vocab(std::move(tokens));
    } catch (const Error& e) {
        throw ParseError(source, 1, e.what());
    }
}

Vocab Vocab::load(const std::string& path) { return parse(util::read_file(path), path); }

std::string Vocab::format() const {
    std::string out;
    for (const auto& t : tokens_) {
        out += t;
        out += '\n';
    }
    return out;
}

void Vocab::save(const std::string& path) const { util::write_file(path, format()); }

std::optional<Token> Vocab::find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocab build_vocab(std::span<const std::string> corpus) {
    if (corpus.empty()) throw Error(ErrorCode::EmptyInput, "cannot build a vocabulary from an empty corpus");
    std::set<std::string> clusters;
    for (const auto& line : corpus) {
        for (auto& g : unicode::graphemes(line)) {
            if (g == " " || g == kBlankSymbol || g == kUnknownSymbol || g == kWordDelimiter) continue;
            clusters.insert(std::move(g));
        }
    }
    std::vector<std::string> tokens{std::string(kBlankSymbol), std::string(kUnknownSymbol),
                                    std::string(kWordDelimiter)};
    tokens.insert(tokens.end(), clusters.begin(), clusters.end());
    return Vocab(std::move(tokens));
}

LabelSequence encode_labels(std::string_view normalized, const Vocab& vocab) {
    LabelSequence out;
    for (const auto& g : unicode::graphemes(normalized)) {
        if (g == " ") {
            out.push_back(kDelimiterIndex);
        } else if (auto idx = vocab.find(g); idx && *idx != kBlankIndex) {
            out.push_back(*idx);
        } else {
            out.push_back(kUnknownIndex);
        }
    }
    return out;
}

std::string decode_labels(std::span<const Token> labels, const Vocab& vocab) {
    std::string out;
    for (Token t : labels) {
        if (t == kDelimiterIndex) {
            out += ' ';
        } else if (t >= 0 && static_cast<std::size_t>(t) < vocab.size()) {
            out += vocab.token(t);
        }
    }
    return out;
}

}  // namespace ctcprep
