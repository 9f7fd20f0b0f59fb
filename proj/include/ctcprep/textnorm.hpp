// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctcprep/ctc.hpp"

namespace ctcprep {

inline constexpr std::string_view kBlankSymbol = "<pad>";
inline constexpr std::string_view kUnknownSymbol = "<unk>";
inline constexpr std::string_view kWordDelimiter = "|";
inline constexpr Token kBlankIndex = 0;
inline constexpr Token kUnknownIndex = 1;
inline constexpr Token kDelimiterIndex = 2;

struct NormalizeOptions {
    bool lowercase = true;
};

/// Punctuation is every code point in the Unicode P* categories plus the
/// ASCII symbols : ; ! ? ( ) [ ] " ' ; digits are category Nd. The result is
/// NFC, trimmed, with whitespace runs collapsed to one space.
std::string normalize_line(std::string_view raw, const NormalizeOptions& options = {});

/// Normalizes every line, drops empty results and exact duplicates (first
/// occurrence wins).
std::vector<std::string> normalize_corpus(std::span<const std::string> lines, const NormalizeOptions& options = {});

/// Splits UTF-8 text into extended grapheme clusters.
std::vector<std::string> grapheme_clusters(std::string_view text);

/// Character-level replacement table consulted by `romanize` for code
/// points that are still outside basic Latin after diacritics are stripped.
class RomanizeTable {
public:
    /// A small built-in table (ɛ→e, ɔ→o, ŋ→n, ß→ss, æ→ae, ...).
    static RomanizeTable defaults();
    static RomanizeTable empty() { return RomanizeTable{}; }
    /// Two-column UTF-8 file: `from<TAB>to` per line; `#` starts a comment.
    static RomanizeTable load(const std::string& path);
    static RomanizeTable parse(std::string_view text, const std::string& source = "<memory>");

    void set(std::string from, std::string to);
    const std::string* find(std::string_view from) const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

/// Strip-diacritics romanization: NFD, drop combining marks, map remaining
/// non-ASCII code points through `table` (unmapped ones are dropped), keep
/// ASCII letters, and emit one space-separated character per token with `|`
/// standing for each word boundary.
std::string romanize(std::string_view normalized, const RomanizeTable& table = RomanizeTable::defaults());

/// Ordered token set: `<pad>`, `<unk>`, `|`, then sorted grapheme clusters.
class Vocab {
public:
    /// Throws Validation on duplicates or when the reserved prefix is wrong.
    explicit Vocab(std::vector<std::string> tokens);

    static Vocab load(const std::string& path);
    static Vocab parse(std::string_view text, const std::string& source = "<memory>");
    void save(const std::string& path) const;
    std::string format() const;

    std::size_t size() const noexcept { return tokens_.size(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    const std::string& token(Token index) const { return tokens_.at(static_cast<std::size_t>(index)); }
    std::optional<Token> find(std::string_view token) const;

    bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, Token> index_;
};

/// Throws EmptyInput on an empty corpus.
Vocab build_vocab(std::span<const std::string> corpus);

/// One index per grapheme cluster; spaces become the word delimiter and
/// unseen clusters become `<unk>`. Never emits blank.
LabelSequence encode_labels(std::string_view normalized, const Vocab& vocab);

/// Inverse of encode_labels for known tokens; `|` maps back to a space.
std::string decode_labels(std::span<const Token> labels, const Vocab& vocab);

}  // namespace ctcprep
