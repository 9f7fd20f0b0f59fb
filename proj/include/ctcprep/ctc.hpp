// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ctcprep {

using Token = std::int32_t;
using LabelSequence = std::vector<Token>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Frame state used in alignment paths for frames absorbed by the optional
/// lead-in wildcard. Never a vocabulary index.
inline constexpr Token kWildcardToken = -1;

/// Label sentinel written into padded label rows.
inline constexpr Token kPadLabel = -100;

inline constexpr double kDefaultFrameDuration = 0.02;

/// Tolerance used to accept emission rows as normalized distributions.
inline constexpr double kRowNormTolerance = 1e-3;

/// Dense row-major real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double logsumexp(std::span<const double> values);
double log_add(double a, double b);

/// Per-frame emission log-probabilities over a vocabulary.
///
/// Construction validates that every row is a normalized distribution in log
/// space (|logsumexp(row)| <= 1e-3, entries <= 1e-3) and that the blank index
/// lies inside the vocabulary. Instances are immutable.
class LogProbMatrix {
public:
    LogProbMatrix(Matrix values, double frame_duration = kDefaultFrameDuration,
                  Token blank = 0, std::vector<std::string> vocabulary = {});

    /// Row-wise log-softmax of raw scores.
    static LogProbMatrix from_logits(const Matrix& logits, double frame_duration = kDefaultFrameDuration,
                                     Token blank = 0);

    std::size_t num_frames() const noexcept { return values_.rows(); }
    std::size_t vocab_size() const noexcept { return values_.cols(); }
    double frame_duration() const noexcept { return frame_duration_; }
    Token blank() const noexcept { return blank_; }
    const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }

    double operator()(std::size_t frame, Token token) const {
        return values_(frame, static_cast<std::size_t>(token));
    }
    std::span<const double> row(std::size_t frame) const { return values_.row(frame); }
    const Matrix& values() const noexcept { return values_; }

    /// First `frames` rows as a new matrix.
    LogProbMatrix truncated(std::size_t frames) const;

private:
    Matrix values_;
    double frame_duration_;
    Token blank_;
    std::vector<std::string> vocabulary_;
};

/// One aligned label token occupying frames [start_frame, end_frame).
struct TokenSpan {
    Token token = 0;
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;
    double score = 0.0;  ///< summed natural-log emission probability over the span

    bool operator==(const TokenSpan&) const = default;
};

/// Per-frame token states; blank and kWildcardToken allowed.
using AlignmentPath = std::vector<Token>;

struct Alignment {
    AlignmentPath path;
    std::vector<TokenSpan> spans;  ///< one per label token, in label order
    double score = kNegInf;
};

struct AlignOptions {
    bool wildcard = false;
    double wildcard_logprob = -0.6931471805599453;  // ln 0.5
};

struct PaddedBatch {
    std::size_t batch_size = 0;
    std::size_t max_frames = 0;
    std::size_t vocab_size = 0;
    std::size_t max_labels = 0;
    std::vector<double> emissions;  ///< batch_size x max_frames x vocab_size, row-major
    std::vector<std::size_t> emission_lengths;
    std::vector<Token> labels;  ///< batch_size x max_labels, padded with pad_label
    std::vector<std::size_t> label_lengths;
    Token pad_label = kPadLabel;
    double frame_duration = kDefaultFrameDuration;
    Token blank = 0;

    double emission(std::size_t item, std::size_t frame, std::size_t token) const {
        return emissions[(item * max_frames + frame) * vocab_size + token];
    }
    Token label(std::size_t item, std::size_t pos) const { return labels[item * max_labels + pos]; }

    /// Rebuilds item `i` truncated to its recorded lengths.
    LogProbMatrix item_emissions(std::size_t i) const;
    LabelSequence item_labels(std::size_t i) const;
};

/// Throws InvalidLabel when a token is outside [0, vocab_size) or equals blank.
void validate_labels(std::span<const Token> labels, std::size_t vocab_size, Token blank);

/// Fewest frames that can emit `labels`: one per token plus one blank
/// between each adjacent repeated pair.
std::size_t min_frames_required(std::span<const Token> labels);

/// Merge adjacent repeats, then drop blanks and wildcard frames.
LabelSequence collapse(std::span<const Token> path, Token blank);

/// log p(labels | emissions) by the forward recursion over the
/// blank-interleaved lattice; -inf when no alignment fits.
double ctc_log_likelihood(const LogProbMatrix& emissions, std::span<const Token> labels);

/// Negative log-likelihood; +inf when infeasible.
double ctc_loss(const LogProbMatrix& emissions, std::span<const Token> labels);

/// d ctc_loss / d logits, where emissions = log_softmax(logits) row-wise.
/// Equals softmax(logits) minus the forward-backward occupancy posterior.
Matrix ctc_gradient(const Matrix& logits, std::span<const Token> labels, Token blank = 0);

/// Best-path decoding; argmax ties go to the lowest token index.
LabelSequence greedy_decode(const LogProbMatrix& emissions);

/// Viterbi alignment over the CTC lattice. Among equally scored paths the
/// one whose lattice state sequence is lexicographically greatest wins, i.e.
/// the path that advances through the lattice at the earliest frame.
Alignment forced_align(const LogProbMatrix& emissions, std::span<const Token> labels,
                       const AlignOptions& options = {});

/// Token spans of a lattice path; frames holding blank or the wildcard are
/// gaps. Spans follow label order.
std::vector<TokenSpan> spans_from_path(const LogProbMatrix& emissions, std::span<const Token> path,
                                       std::span<const Token> labels);

PaddedBatch pad_batch(std::span<const LogProbMatrix> emissions, std::span<const LabelSequence> labels);

// Emission matrix text format:
//   line 1: "T V frame_duration_sec"
//   line 2: V vocabulary tokens; "<pad>" marks blank
//   lines 3..T+2: V natural-log probabilities per line
LogProbMatrix parse_emissions(std::string_view text, const std::string& source = "<memory>");
LogProbMatrix load_emissions(const std::string& path);
std::string format_emissions(const LogProbMatrix& emissions);
void save_emissions(const LogProbMatrix& emissions, const std::string& path);

}  // namespace ctcprep
