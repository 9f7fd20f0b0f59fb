// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>

#include "ctc/lattice.hpp"
#include "ctcprep/ctc.hpp"
#include "ctcprep/error.hpp"

namespace ctcprep {

namespace {

using detail::Lattice;

// Successor choice for a lattice state: how far the state index advances on
// the next frame.
enum Step : std::int8_t { kStay = 0, kNext = 1, kSkip = 2 };

// Successor choice for the wildcard state.
enum WildStep : std::int8_t { kWildStay = 0, kToBlank = 1, kToFirst = 2 };

// States that can lie on a complete path at frame t form a band
// [lo, hi]: at most 2t+1 states reached from the start, and enough left to
// finish by frame T-1.
struct Band {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

Band band_at(std::size_t t, std::size_t T, std::size_t S) {
    Band b;
    b.hi = std::min(S - 1, 2 * t + 1);
    const std::size_t remaining = 2 * (T - 1 - t);
    const std::size_t last_needed = S >= 2 ? S - 2 : 0;
    b.lo = last_needed > remaining ? last_needed - remaining : 0;
    return b;
}

}  // namespace

std::vector<TokenSpan> spans_from_path(const LogProbMatrix& emissions, std::span<const Token> path,
                                       std::span<const Token> labels) {
    std::vector<TokenSpan> spans;
    spans.reserve(labels.size());
    const Token blank = emissions.blank();
    Token prev = blank;
    for (std::size_t t = 0; t < path.size(); ++t) {
        const Token tok = path[t];
        if (tok == blank || tok == kWildcardToken) {
            prev = tok;
            continue;
        }
        if (tok == prev && !spans.empty()) {
            spans.back().end_frame = t + 1;
            spans.back().score += emissions(t, tok);
        } else {
            if (spans.size() >= labels.size() || labels[spans.size()] != tok) {
                throw Error(ErrorCode::Internal, "path does not collapse to the label sequence");
            }
            spans.push_back(TokenSpan{tok, t, t + 1, emissions(t, tok)});
        }
        prev = tok;
    }
    if (spans.size() != labels.size()) {
        throw Error(ErrorCode::Internal, "path does not collapse to the label sequence");
    }
    return spans;
}

Alignment forced_align(const LogProbMatrix& emissions, std::span<const Token> labels, const AlignOptions& options) {
    validate_labels(labels, emissions.vocab_size(), emissions.blank());
    const std::size_t T = emissions.num_frames();
    if (min_frames_required(labels) > T) {
        throw Error(ErrorCode::InfeasibleLabel, "labels need " + std::to_string(min_frames_required(labels)) +
                                                    " frames, only " + std::to_string(T) + " available");
    }
    const Lattice lat(labels, emissions.blank());
    const std::size_t S = lat.size();
    const auto emit = [&](std::size_t t, std::size_t s) {
        return emissions(t, lat.token(s));
    };

    // Backward Viterbi: best[s] is the best score of any completion that
    // occupies state s at the current frame. Successor choices are kept per
    // frame inside the band so the path can be replayed forwards.
    std::vector<Band> bands(T);
    std::vector<std::size_t> offsets(T + 1, 0);
    for (std::size_t t = 0; t < T; ++t) {
        bands[t] = band_at(t, T, S);
        const std::size_t width = bands[t].hi >= bands[t].lo ? bands[t].hi - bands[t].lo + 1 : 0;
        offsets[t + 1] = offsets[t] + width;
    }
    std::vector<std::int8_t> steps(offsets[T], kStay);
    std::vector<std::int8_t> wild_steps(options.wildcard ? T : 0, kWildStay);

    std::vector<double> next(S, kNegInf), cur(S, kNegInf);
    double next_wild = kNegInf;
    next[S - 1] = emit(T - 1, S - 1);
    if (S > 1) next[S - 2] = emit(T - 1, S - 2);

    for (std::size_t t = T - 1; t-- > 0;) {
        std::fill(cur.begin(), cur.end(), kNegInf);
        const Band b = bands[t];
        for (std::size_t s = b.lo; s <= b.hi && s < S; ++s) {
            // Preference on ties: the furthest advance.
            double best = kNegInf;
            Step step = kStay;
            if (lat.can_skip(s) && next[s + 2] > best) {
                best = next[s + 2];
                step = kSkip;
            }
            if (s + 1 < S && next[s + 1] > best) {
                best = next[s + 1];
                step = kNext;
            }
            if (next[s] > best) {
                best = next[s];
                step = kStay;
            }
            steps[offsets[t] + (s - b.lo)] = step;
            cur[s] = best == kNegInf ? kNegInf : emit(t, s) + best;
        }
        if (options.wildcard) {
            double best = kNegInf;
            WildStep step = kWildStay;
            if (S > 1 && next[1] > best) {
                best = next[1];
                step = kToFirst;
            }
            if (next[0] > best) {
                best = next[0];
                step = kToBlank;
            }
            if (next_wild > best) {
                best = next_wild;
                step = kWildStay;
            }
            wild_steps[t] = step;
            next_wild = best == kNegInf ? kNegInf : options.wildcard_logprob + best;
        }
        std::swap(cur, next);
    }

    // Start state at frame 0, same preference order.
    constexpr std::size_t kWildState = static_cast<std::size_t>(-1);
    double score = kNegInf;
    std::size_t state = 0;
    if (S > 1 && next[1] > score) {
        score = next[1];
        state = 1;
    }
    if (next[0] > score) {
        score = next[0];
        state = 0;
    }
    if (options.wildcard && next_wild > score) {
        score = next_wild;
        state = kWildState;
    }
    if (score == kNegInf) {
        throw Error(ErrorCode::InfeasibleLabel, "every alignment has zero probability");
    }

    Alignment result;
    result.score = score;
    result.path.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        result.path[t] = state == kWildState ? kWildcardToken : lat.token(state);
        if (t + 1 == T) break;
        if (state == kWildState) {
            switch (wild_steps[t]) {
            case kWildStay: break;
            case kToBlank: state = 0; break;
            case kToFirst: state = 1; break;
            }
        } else {
            state += static_cast<std::size_t>(steps[offsets[t] + (state - bands[t].lo)]);
        }
    }
    result.spans = spans_from_path(emissions, result.path, labels);
    return result;
}

}  // namespace ctcprep
