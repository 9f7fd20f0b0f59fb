// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ctcprep/audio.hpp"
#include "ctcprep/error.hpp"

namespace ctcprep {

namespace {

// Kaiser window with beta 8.6 (about -86 dB stopband) over 32 zero
// crossings of the lower-rate sinc on each side.
constexpr double kKaiserBeta = 8.6;
constexpr double kZeroCrossings = 32.0;
constexpr double kRolloff = 0.97;
// Rational ratios with more phases than this compute taps on the fly.
constexpr std::uint64_t kMaxTablePhases = 4096;

double bessel_i0(double x) {
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

class SincKernel {
public:
    SincKernel(std::uint32_t from, std::uint32_t to)
        : cutoff_(0.5 * std::min(1.0, static_cast<double>(to) / from) * kRolloff),
          half_width_(kZeroCrossings / (2.0 * cutoff_)),
          norm_(1.0 / bessel_i0(kKaiserBeta)) {}

    double half_width() const { return half_width_; }

    // Response at a distance of `d` input samples.
    double operator()(double d) const {
        const double r = d / half_width_;
        if (r <= -1.0 || r >= 1.0) return 0.0;
        const double window = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) * norm_;
        const double x = 2.0 * cutoff_ * d;
        const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
        return 2.0 * cutoff_ * sinc * window;
    }

private:
    double cutoff_;      // cycles per input sample
    double half_width_;  // input samples
    double norm_;
};

// Taps for one fractional offset, normalized to unit DC gain. Tap j applies
// to input sample base + j - (radius - 1).
std::vector<double> phase_taps(const SincKernel& kernel, double frac, std::int64_t radius) {
    std::vector<double> taps(static_cast<std::size_t>(2 * radius));
    double sum = 0.0;
    for (std::int64_t j = 0; j < 2 * radius; ++j) {
        const std::int64_t offset = j - (radius - 1);
        taps[static_cast<std::size_t>(j)] = kernel(frac - static_cast<double>(offset));
        sum += taps[static_cast<std::size_t>(j)];
    }
    if (sum != 0.0)
        for (double& t : taps) t /= sum;
    return taps;
}

}  // namespace

std::vector<float> resample(std::span<const float> mono, std::uint32_t from_rate, std::uint32_t to_rate) {
    if (from_rate == 0 || to_rate == 0) throw Error(ErrorCode::InvalidArgument, "sample rates must be positive");
    if (from_rate == to_rate) return {mono.begin(), mono.end()};

    const std::uint64_t g = std::gcd(from_rate, to_rate);
    const std::uint64_t up = to_rate / g;    // output step numerator
    const std::uint64_t down = from_rate / g;
    const std::uint64_t n_in = mono.size();
    const std::uint64_t n_out = (n_in * to_rate + from_rate / 2) / from_rate;

    const SincKernel kernel(from_rate, to_rate);
    const auto radius = static_cast<std::int64_t>(std::ceil(kernel.half_width())) + 1;

    std::vector<std::vector<double>> table;
    if (up <= kMaxTablePhases) {
        table.reserve(up);
        for (std::uint64_t p = 0; p < up; ++p)
            table.push_back(phase_taps(kernel, static_cast<double>(p) / static_cast<double>(up), radius));
    }

    std::vector<float> out(n_out);
    std::vector<double> scratch;
    for (std::uint64_t n = 0; n < n_out; ++n) {
        const std::uint64_t pos = n * down;
        const auto base = static_cast<std::int64_t>(pos / up);
        const std::uint64_t phase = pos % up;
        const std::vector<double>* taps = nullptr;
        if (!table.empty()) {
            taps = &table[phase];
        } else {
            scratch = phase_taps(kernel, static_cast<double>(phase) / static_cast<double>(up), radius);
            taps = &scratch;
        }
        double acc = 0.0;
        const std::int64_t first = base - (radius - 1);
        for (std::int64_t j = 0; j < 2 * radius; ++j) {
            const std::int64_t i = first + j;
            if (i < 0 || i >= static_cast<std::int64_t>(n_in)) continue;
            acc += (*taps)[static_cast<std::size_t>(j)] * mono[static_cast<std::size_t>(i)];
        }
        out[n] = static_cast<float>(std::clamp(acc, -1.0, 1.0));
    }
    return out;
}

AudioBuffer to_mono_16k(const AudioBuffer& buffer) {
    if (buffer.is_model_ready()) return buffer;
    const std::size_t frames = buffer.frames();
    const std::size_t ch = buffer.channels();
    std::vector<float> mono(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        double sum = 0.0;
        for (std::size_t c = 0; c < ch; ++c) sum += buffer.samples()[f * ch + c];
        mono[f] = static_cast<float>(sum / static_cast<double>(ch));
    }
    if (buffer.sample_rate() == kModelSampleRate) return AudioBuffer(std::move(mono), kModelSampleRate, 1);
    return AudioBuffer(resample(mono, buffer.sample_rate(), kModelSampleRate), kModelSampleRate, 1);
}

}  // namespace ctcprep
