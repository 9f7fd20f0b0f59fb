// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ctcprep/corpus.hpp"
#include "ctcprep/ctc.hpp"
#include "ctcprep/textnorm.hpp"

namespace ctcprep {

/// Toolkit settings. The file format is one `key = value` per line; `#`
/// starts a comment. Keys:
///
///   text.lowercase           bool    (true)
///   romanize.table           path    (built-in table when unset)
///   align.wildcard           bool    (false)
///   align.wildcard_logprob   real    (-0.6931471805599453, ln 0.5)
///   audio.frame_duration     seconds (0.02)
///   audio.target_dbfs        real    (-1.0)
///   audio.segment_dir        path    (segments)
///   filter.min_duration      seconds or `off` (1.0)
///   filter.max_duration      seconds or `off` (30.0)
///   filter.min_word_rate     words/s or `off` (0.4)
///   filter.max_word_rate     words/s or `off` (6.0)
///   filter.min_char_rate     chars/s or `off` (2.0)
///   filter.max_char_rate     chars/s or `off` (30.0)
///   filter.require_tag_high  bool    (false)
///   split.ratio              real in (0, 1) (0.8)
///   split.seed               unsigned integer (0)
///   split.per_chapter        bool    (false)
///   review.port              integer (8517)
///   review.peak_buckets      integer (800)
struct ToolkitConfig {
    NormalizeOptions normalize;
    std::string romanize_table_path;
    AlignOptions align;
    double frame_duration = kDefaultFrameDuration;
    double target_dbfs = -1.0;
    std::string segment_dir = "segments";
    FilterRules filter;
    SplitOptions split;
    int review_port = 8517;
    std::size_t peak_buckets = 800;

    static ToolkitConfig load(const std::string& path);
    static ToolkitConfig parse(std::string_view text, const std::string& source = "<memory>");

    /// Applies one setting; throws Config on an unknown key or bad value.
    void set(std::string_view key, std::string_view value);
    /// Current value of `key` in the syntax set() accepts.
    std::string get(std::string_view key) const;
    /// Throws Config on inconsistent values.
    void validate() const;

    RomanizeTable romanize_table() const;
    static const std::vector<std::string>& keys();
};

}  // namespace ctcprep
