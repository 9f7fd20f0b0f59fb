// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>

#include "ctcprep/audio.hpp"
#include "ctcprep/error.hpp"

namespace ctcprep {

AudioBuffer peak_normalize(const AudioBuffer& buffer, double target_dbfs) {
    float peak = 0.0f;
    for (float s : buffer.samples()) peak = std::max(peak, std::abs(s));
    if (peak == 0.0f) return buffer;
    const double target = std::pow(10.0, target_dbfs / 20.0);
    const double gain = target / static_cast<double>(peak);
    std::vector<float> scaled(buffer.samples().size());
    std::transform(buffer.samples().begin(), buffer.samples().end(), scaled.begin(),
                   [gain](float s) { return static_cast<float>(static_cast<double>(s) * gain); });
    return AudioBuffer(std::move(scaled), buffer.sample_rate(), buffer.channels());
}

AudioBuffer cut_segment(const AudioBuffer& buffer, std::size_t start_frame, std::size_t end_frame,
                        double frame_duration) {
    if (!buffer.is_model_ready()) {
        throw Error(ErrorCode::InvalidArgument, "cut_segment expects mono 16 kHz audio");
    }
    if (!(frame_duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "frame duration must be positive");
    if (start_frame >= end_frame) {
        throw Error(ErrorCode::OutOfRange, "empty span [" + std::to_string(start_frame) + ", " +
                                               std::to_string(end_frame) + ")");
    }
    const double start_time = static_cast<double>(start_frame) * frame_duration;
    const double end_time = static_cast<double>(end_frame) * frame_duration;
    if (end_time > buffer.duration() + frame_duration + 1e-9) {
        throw Error(ErrorCode::OutOfRange, "span ends at " + std::to_string(end_time) + " s, audio lasts " +
                                               std::to_string(buffer.duration()) + " s");
    }
    const std::size_t n = buffer.samples().size();
    const auto to_index = [&](double t) {
        return std::min(n, static_cast<std::size_t>(std::llround(t * kModelSampleRate)));
    };
    const std::size_t first = to_index(start_time);
    const std::size_t last = to_index(end_time);
    std::vector<float> out(buffer.samples().begin() + static_cast<std::ptrdiff_t>(first),
                           buffer.samples().begin() + static_cast<std::ptrdiff_t>(last));
    return AudioBuffer(std::move(out), kModelSampleRate, 1);
}

std::vector<std::pair<float, float>> waveform_peaks(const AudioBuffer& buffer, std::size_t buckets) {
    const std::size_t n = buffer.samples().size();
    const std::size_t count = std::min(buckets, n);
    std::vector<std::pair<float, float>> peaks(count, {0.0f, 0.0f});
    for (std::size_t b = 0; b < count; ++b) {
        const std::size_t lo = b * n / count;
        const std::size_t hi = (b + 1) * n / count;
        float mn = buffer.samples()[lo], mx = buffer.samples()[lo];
        for (std::size_t i = lo; i < hi; ++i) {
            mn = std::min(mn, buffer.samples()[i]);
            mx = std::max(mx, buffer.samples()[i]);
        }
        peaks[b] = {mn, mx};
    }
    return peaks;
}

}  // namespace ctcprep
