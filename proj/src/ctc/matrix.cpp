// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>

#include "ctcprep/ctc.hpp"
#include "ctcprep/error.hpp"

namespace ctcprep {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::InvalidArgument, "matrix data size does not match its shape");
    }
}

double logsumexp(std::span<const double> values) {
    double m = kNegInf;
    for (double v : values) m = std::max(m, v);
    if (m == kNegInf) return kNegInf;
    if (m == kPosInf) return kPosInf;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - m);
    return m + std::log(sum);
}

double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

LogProbMatrix::LogProbMatrix(Matrix values, double frame_duration, Token blank,
                             std::vector<std::string> vocabulary)
    : values_(std::move(values)), frame_duration_(frame_duration), blank_(blank),
      vocabulary_(std::move(vocabulary)) {
    if (values_.rows() < 1) throw Error(ErrorCode::InvalidArgument, "emissions need at least one frame");
    if (values_.cols() < 2) throw Error(ErrorCode::InvalidArgument, "emissions need a vocabulary of at least 2");
    if (!(frame_duration_ > 0.0) || !std::isfinite(frame_duration_)) {
        throw Error(ErrorCode::InvalidArgument, "frame duration must be positive");
    }
    if (blank_ < 0 || static_cast<std::size_t>(blank_) >= values_.cols()) {
        throw Error(ErrorCode::InvalidArgument, "blank index outside vocabulary");
    }
    if (!vocabulary_.empty() && vocabulary_.size() != values_.cols()) {
        throw Error(ErrorCode::InvalidArgument, "vocabulary size does not match emission width");
    }
    for (std::size_t t = 0; t < values_.rows(); ++t) {
        auto r = values_.row(t);
        for (double v : r) {
            if (std::isnan(v) || v > kRowNormTolerance) {
                throw Error(ErrorCode::InvalidArgument,
                            "frame " + std::to_string(t) + ": entry is not a log-probability");
            }
        }
        double z = logsumexp(r);
        if (!(std::abs(z) <= kRowNormTolerance)) {
            throw Error(ErrorCode::InvalidArgument,
                        "frame " + std::to_string(t) + ": row is not normalized (logsumexp = " +
                            std::to_string(z) + ")");
        }
    }
}

LogProbMatrix LogProbMatrix::from_logits(const Matrix& logits, double frame_duration, Token blank) {
    Matrix out(logits.rows(), logits.cols());
    for (std::size_t t = 0; t < logits.rows(); ++t) {
        double z = logsumexp(logits.row(t));
        for (std::size_t k = 0; k < logits.cols(); ++k) out(t, k) = logits(t, k) - z;
    }
    return LogProbMatrix(std::move(out), frame_duration, blank);
}

LogProbMatrix LogProbMatrix::truncated(std::size_t frames) const {
    if (frames < 1 || frames > num_frames()) {
        throw Error(ErrorCode::OutOfRange, "truncation length outside [1, T]");
    }
    std::vector<double> data(values_.data().begin(),
                             values_.data().begin() + static_cast<std::ptrdiff_t>(frames * vocab_size()));
    return LogProbMatrix(Matrix(frames, vocab_size(), std::move(data)), frame_duration_, blank_, vocabulary_);
}

LogProbMatrix PaddedBatch::item_emissions(std::size_t i) const {
    const std::size_t len = emission_lengths.at(i);
    Matrix m(len, vocab_size);
    for (std::size_t t = 0; t < len; ++t)
        for (std::size_t k = 0; k < vocab_size; ++k) m(t, k) = emission(i, t, k);
    return LogProbMatrix(std::move(m), frame_duration, blank);
}

LabelSequence PaddedBatch::item_labels(std::size_t i) const {
    LabelSequence out(label_lengths.at(i));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = label(i, j);
    return out;
}

PaddedBatch pad_batch(std::span<const LogProbMatrix> emissions, std::span<const LabelSequence> labels) {
    if (emissions.empty()) throw Error(ErrorCode::EmptyInput, "cannot pad an empty batch");
    if (emissions.size() != labels.size()) {
        throw Error(ErrorCode::IncompatibleBatch, "emission and label counts differ");
    }
    PaddedBatch batch;
    batch.batch_size = emissions.size();
    batch.vocab_size = emissions.front().vocab_size();
    batch.frame_duration = emissions.front().frame_duration();
    batch.blank = emissions.front().blank();
    for (std::size_t i = 0; i < emissions.size(); ++i) {
        const auto& e = emissions[i];
        if (e.vocab_size() != batch.vocab_size) {
            throw Error(ErrorCode::IncompatibleBatch,
                        "item " + std::to_string(i) + " has vocabulary size " + std::to_string(e.vocab_size()) +
                            ", expected " + std::to_string(batch.vocab_size));
        }
        if (e.frame_duration() != batch.frame_duration || e.blank() != batch.blank) {
            throw Error(ErrorCode::IncompatibleBatch,
                        "item " + std::to_string(i) + " differs in frame duration or blank index");
        }
        validate_labels(labels[i], e.vocab_size(), e.blank());
        batch.max_frames = std::max(batch.max_frames, e.num_frames());
        batch.max_labels = std::max(batch.max_labels, labels[i].size());
    }

    const std::size_t V = batch.vocab_size;
    batch.emissions.assign(batch.batch_size * batch.max_frames * V, kNegInf);
    batch.labels.assign(batch.batch_size * batch.max_labels, batch.pad_label);
    for (std::size_t i = 0; i < batch.batch_size; ++i) {
        const auto& e = emissions[i];
        double* dst = batch.emissions.data() + i * batch.max_frames * V;
        std::copy(e.values().data().begin(), e.values().data().end(), dst);
        for (std::size_t t = e.num_frames(); t < batch.max_frames; ++t) {
            dst[t * V + static_cast<std::size_t>(batch.blank)] = 0.0;
        }
        std::copy(labels[i].begin(), labels[i].end(), batch.labels.begin() + static_cast<std::ptrdiff_t>(i * batch.max_labels));
        batch.emission_lengths.push_back(e.num_frames());
        batch.label_lengths.push_back(labels[i].size());
    }
    return batch;
}

}  // namespace ctcprep
