// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctcprep/corpus.hpp"

namespace ctcprep {

struct ErrorBreakdown {
    std::size_t substitutions = 0;
    std::size_t deletions = 0;
    std::size_t insertions = 0;
    std::size_t reference_length = 0;

    std::size_t errors() const noexcept { return substitutions + deletions + insertions; }
    /// (S + D + I) / N; 0 when both sides are empty; +inf when only the
    /// reference is empty.
    double rate() const noexcept;
    bool undefined_reference() const noexcept { return reference_length == 0 && errors() > 0; }

    ErrorBreakdown& operator+=(const ErrorBreakdown& other) noexcept;
    bool operator==(const ErrorBreakdown&) const = default;
};

/// Minimal edits turning `reference` into `hypothesis`. Among minimal edit
/// scripts the traceback prefers substitution, then deletion, then insertion.
ErrorBreakdown levenshtein(std::span<const std::string> reference, std::span<const std::string> hypothesis);

std::vector<std::string> word_tokens(std::string_view text);
/// Grapheme clusters; each single space between words is its own token.
std::vector<std::string> char_tokens(std::string_view text);

ErrorBreakdown word_errors(std::string_view reference, std::string_view hypothesis);
ErrorBreakdown char_errors(std::string_view reference, std::string_view hypothesis);

/// Inputs are expected to be normalized already.
double wer(std::string_view reference, std::string_view hypothesis);
double cer(std::string_view reference, std::string_view hypothesis);

struct SegmentScore {
    std::string id;
    std::string reference;
    std::string hypothesis;
    bool missing_hypothesis = false;
    ErrorBreakdown words;
    ErrorBreakdown chars;
};

struct EvalReport {
    std::vector<SegmentScore> segments;
    ErrorBreakdown words;  ///< pooled over segments
    ErrorBreakdown chars;
    std::size_t missing_hypotheses = 0;
    std::size_t undefined_references = 0;

    double corpus_wer() const noexcept { return words.rate(); }
    double corpus_cer() const noexcept { return chars.rate(); }
};

/// Hypothesis file: `id<TAB>text` per line. Throws on duplicate ids.
std::map<std::string, std::string> parse_hypotheses(std::string_view text, const std::string& source = "<memory>");
std::map<std::string, std::string> load_hypotheses(const std::string& path);

/// Scores every manifest record against its hypothesis (a missing one counts
/// as empty). Both sides are normalized before scoring; corpus rates pool
/// S/D/I and reference lengths across segments.
EvalReport eval_report(std::span<const SegmentRecord> manifest, const std::map<std::string, std::string>& hypotheses,
                       const NormalizeOptions& normalize = {});

/// Human-readable per-segment table plus totals at 6 decimal places.
std::string format_report_table(const EvalReport& report);
/// One JSON object per segment plus a final `"type":"corpus"` summary.
std::string format_report_jsonl(const EvalReport& report);

/// Fixed 6-decimal rendering; "inf" for undefined rates.
std::string format_rate(double rate);

}  // namespace ctcprep
