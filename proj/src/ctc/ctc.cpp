// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>

#include "ctc/lattice.hpp"
#include "ctcprep/ctc.hpp"
#include "ctcprep/error.hpp"

namespace ctcprep {

void validate_labels(std::span<const Token> labels, std::size_t vocab_size, Token blank) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const Token tok = labels[i];
        if (tok < 0 || static_cast<std::size_t>(tok) >= vocab_size) {
            throw Error(ErrorCode::InvalidLabel, "label " + std::to_string(i) + " = " + std::to_string(tok) +
                                                     " outside vocabulary of size " + std::to_string(vocab_size));
        }
        if (tok == blank) {
            throw Error(ErrorCode::InvalidLabel, "label " + std::to_string(i) + " is the blank token");
        }
    }
}

std::size_t min_frames_required(std::span<const Token> labels) {
    std::size_t n = labels.size();
    for (std::size_t i = 1; i < labels.size(); ++i)
        if (labels[i] == labels[i - 1]) ++n;
    return n;
}

LabelSequence collapse(std::span<const Token> path, Token blank) {
    LabelSequence out;
    Token prev = blank;
    bool have_prev = false;
    for (Token tok : path) {
        if (have_prev && tok == prev) continue;
        prev = tok;
        have_prev = true;
        if (tok != blank && tok != kWildcardToken) out.push_back(tok);
    }
    return out;
}

namespace detail {

Lattice::Lattice(std::span<const Token> labels, Token blank) : labels_(labels), blank_(blank) {}

bool Lattice::can_skip(std::size_t s) const {
    // s -> s + 2 skips the blank between two distinct tokens.
    if (s % 2 == 0 || s + 2 >= size()) return false;
    return labels_[s / 2] != labels_[s / 2 + 1];
}

}  // namespace detail

namespace {

using detail::Lattice;

// alpha(t, s) over the whole lattice; returns rows for every frame when
// `keep_all` is set, otherwise only the last row.
Matrix forward_lattice(const Matrix& logp, const Lattice& lat, bool keep_all) {
    const std::size_t T = logp.rows();
    const std::size_t S = lat.size();
    Matrix alpha(keep_all ? T : 1, S, kNegInf);
    std::vector<double> prev(S, kNegInf), cur(S, kNegInf);
    prev[0] = logp(0, static_cast<std::size_t>(lat.token(0)));
    if (S > 1) prev[1] = logp(0, static_cast<std::size_t>(lat.token(1)));
    if (keep_all) std::copy(prev.begin(), prev.end(), alpha.row(0).begin());
    for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t s = 0; s < S; ++s) {
            double acc = prev[s];
            if (s >= 1) acc = log_add(acc, prev[s - 1]);
            if (s >= 2 && lat.can_skip(s - 2)) acc = log_add(acc, prev[s - 2]);
            cur[s] = acc == kNegInf ? kNegInf : acc + logp(t, static_cast<std::size_t>(lat.token(s)));
        }
        std::swap(prev, cur);
        if (keep_all) std::copy(prev.begin(), prev.end(), alpha.row(t).begin());
    }
    if (!keep_all) std::copy(prev.begin(), prev.end(), alpha.row(0).begin());
    return alpha;
}

Matrix backward_lattice(const Matrix& logp, const Lattice& lat) {
    const std::size_t T = logp.rows();
    const std::size_t S = lat.size();
    Matrix beta(T, S, kNegInf);
    beta(T - 1, S - 1) = logp(T - 1, static_cast<std::size_t>(lat.token(S - 1)));
    if (S > 1) beta(T - 1, S - 2) = logp(T - 1, static_cast<std::size_t>(lat.token(S - 2)));
    for (std::size_t t = T - 1; t-- > 0;) {
        for (std::size_t s = 0; s < S; ++s) {
            double acc = beta(t + 1, s);
            if (s + 1 < S) acc = log_add(acc, beta(t + 1, s + 1));
            if (lat.can_skip(s)) acc = log_add(acc, beta(t + 1, s + 2));
            beta(t, s) = acc == kNegInf ? kNegInf : acc + logp(t, static_cast<std::size_t>(lat.token(s)));
        }
    }
    return beta;
}

double final_log_likelihood(std::span<const double> last_alpha) {
    const std::size_t S = last_alpha.size();
    double ll = last_alpha[S - 1];
    if (S > 1) ll = log_add(ll, last_alpha[S - 2]);
    return ll;
}

}  // namespace

double ctc_log_likelihood(const LogProbMatrix& emissions, std::span<const Token> labels) {
    validate_labels(labels, emissions.vocab_size(), emissions.blank());
    if (min_frames_required(labels) > emissions.num_frames()) return kNegInf;
    Lattice lat(labels, emissions.blank());
    Matrix last = forward_lattice(emissions.values(), lat, false);
    return final_log_likelihood(last.row(0));
}

double ctc_loss(const LogProbMatrix& emissions, std::span<const Token> labels) {
    return -ctc_log_likelihood(emissions, labels);
}

Matrix ctc_gradient(const Matrix& logits, std::span<const Token> labels, Token blank) {
    if (logits.rows() < 1 || logits.cols() < 2) {
        throw Error(ErrorCode::InvalidArgument, "logits must be at least 1 x 2");
    }
    validate_labels(labels, logits.cols(), blank);
    if (min_frames_required(labels) > logits.rows()) {
        throw Error(ErrorCode::InfeasibleLabel, "labels need " + std::to_string(min_frames_required(labels)) +
                                                    " frames, only " + std::to_string(logits.rows()) +
                                                    " available; gradient undefined");
    }
    const std::size_t T = logits.rows();
    const std::size_t V = logits.cols();
    Matrix logp(T, V);
    for (std::size_t t = 0; t < T; ++t) {
        const double z = logsumexp(logits.row(t));
        for (std::size_t k = 0; k < V; ++k) logp(t, k) = logits(t, k) - z;
    }
    Lattice lat(labels, blank);
    const Matrix alpha = forward_lattice(logp, lat, true);
    const Matrix beta = backward_lattice(logp, lat);
    const double log_z = final_log_likelihood(alpha.row(T - 1));
    if (log_z == kNegInf) {
        throw Error(ErrorCode::InfeasibleLabel, "no alignment has non-zero probability; gradient undefined");
    }

    Matrix grad(T, V);
    std::vector<double> occupancy(V);
    for (std::size_t t = 0; t < T; ++t) {
        std::fill(occupancy.begin(), occupancy.end(), kNegInf);
        for (std::size_t s = 0; s < lat.size(); ++s) {
            auto k = static_cast<std::size_t>(lat.token(s));
            occupancy[k] = log_add(occupancy[k], alpha(t, s) + beta(t, s));
        }
        for (std::size_t k = 0; k < V; ++k) {
            const double posterior =
                occupancy[k] == kNegInf ? 0.0 : std::exp(occupancy[k] - logp(t, k) - log_z);
            grad(t, k) = std::exp(logp(t, k)) - posterior;
        }
    }
    return grad;
}

LabelSequence greedy_decode(const LogProbMatrix& emissions) {
    AlignmentPath best(emissions.num_frames());
    for (std::size_t t = 0; t < emissions.num_frames(); ++t) {
        auto r = emissions.row(t);
        best[t] = static_cast<Token>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    return collapse(best, emissions.blank());
}

}  // namespace ctcprep
