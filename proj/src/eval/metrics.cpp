// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>

#include "ctcprep/ctc.hpp"
#include "ctcprep/eval.hpp"
#include "ctcprep/textnorm.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

double ErrorBreakdown::rate() const noexcept {
    if (reference_length == 0) return errors() == 0 ? 0.0 : kPosInf;
    return static_cast<double>(errors()) / static_cast<double>(reference_length);
}

ErrorBreakdown& ErrorBreakdown::operator+=(const ErrorBreakdown& other) noexcept {
    substitutions += other.substitutions;
    deletions += other.deletions;
    insertions += other.insertions;
    reference_length += other.reference_length;
    return *this;
}

ErrorBreakdown levenshtein(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
    const std::size_t n = reference.size();
    const std::size_t m = hypothesis.size();
    ErrorBreakdown out;
    out.reference_length = n;
    if (m == 0) {
        out.deletions = n;
        return out;
    }
    if (n == 0) {
        out.insertions = m;
        return out;
    }
    if (std::equal(reference.begin(), reference.end(), hypothesis.begin(), hypothesis.end())) return out;

    // cost(i, j): edits turning reference[0, i) into hypothesis[0, j).
    std::vector<std::uint32_t> cost((n + 1) * (m + 1));
    auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
    for (std::size_t i = 0; i <= n; ++i) cost[at(i, 0)] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j <= m; ++j) cost[at(0, j)] = static_cast<std::uint32_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::uint32_t diag = cost[at(i - 1, j - 1)] + (reference[i - 1] == hypothesis[j - 1] ? 0u : 1u);
            const std::uint32_t del = cost[at(i - 1, j)] + 1;
            const std::uint32_t ins = cost[at(i, j - 1)] + 1;
            cost[at(i, j)] = std::min({diag, del, ins});
        }
    }

    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const std::uint32_t here = cost[at(i, j)];
        if (i > 0 && j > 0) {
            const bool same = reference[i - 1] == hypothesis[j - 1];
            if (cost[at(i - 1, j - 1)] + (same ? 0u : 1u) == here) {
                if (!same) ++out.substitutions;
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && cost[at(i - 1, j)] + 1 == here) {
            ++out.deletions;
            --i;
            continue;
        }
        ++out.insertions;
        --j;
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (auto f : util::split_fields(text)) out.emplace_back(f);
    return out;
}

std::vector<std::string> char_tokens(std::string_view text) { return grapheme_clusters(text); }

ErrorBreakdown word_errors(std::string_view reference, std::string_view hypothesis) {
    return levenshtein(word_tokens(reference), word_tokens(hypothesis));
}

ErrorBreakdown char_errors(std::string_view reference, std::string_view hypothesis) {
    return levenshtein(char_tokens(reference), char_tokens(hypothesis));
}

double wer(std::string_view reference, std::string_view hypothesis) {
    return word_errors(reference, hypothesis).rate();
}

double cer(std::string_view reference, std::string_view hypothesis) {
    return char_errors(reference, hypothesis).rate();
}

}  // namespace ctcprep
