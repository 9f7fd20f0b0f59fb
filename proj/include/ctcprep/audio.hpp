// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ctcprep {

inline constexpr std::uint32_t kModelSampleRate = 16000;

/// Interleaved samples in [-1, 1].
class AudioBuffer {
public:
    AudioBuffer() = default;
    AudioBuffer(std::vector<float> samples, std::uint32_t sample_rate, std::uint16_t channels = 1);

    const std::vector<float>& samples() const noexcept { return samples_; }
    std::uint32_t sample_rate() const noexcept { return sample_rate_; }
    std::uint16_t channels() const noexcept { return channels_; }
    std::size_t frames() const noexcept { return channels_ ? samples_.size() / channels_ : 0; }
    double duration() const noexcept { return sample_rate_ ? static_cast<double>(frames()) / sample_rate_ : 0.0; }
    bool is_model_ready() const noexcept { return channels_ == 1 && sample_rate_ == kModelSampleRate; }

    bool operator==(const AudioBuffer&) const = default;

private:
    std::vector<float> samples_;
    std::uint32_t sample_rate_ = kModelSampleRate;
    std::uint16_t channels_ = 1;
};

/// Reads RIFF/WAVE with PCM 16-bit or IEEE float 32-bit samples. PCM-16 is
/// scaled by 1/32768, so -32768 maps to exactly -1.0.
AudioBuffer load_wav(const std::string& path);
AudioBuffer parse_wav(std::span<const std::uint8_t> bytes, const std::string& source = "<memory>");

/// Always PCM-16 little-endian; samples are clipped to [-1, 1] and rounded.
std::vector<std::uint8_t> encode_wav_pcm16(const AudioBuffer& buffer);
void save_wav(const AudioBuffer& buffer, const std::string& path);

/// Averages channels to mono, then resamples to 16 kHz. Input that is
/// already mono 16 kHz is returned unchanged.
AudioBuffer to_mono_16k(const AudioBuffer& buffer);

/// Windowed-sinc polyphase resampling of a mono signal.
std::vector<float> resample(std::span<const float> mono, std::uint32_t from_rate, std::uint32_t to_rate);

/// Scales so that max |sample| = 10^(target_dbfs / 20); all-zero input is
/// returned unchanged.
AudioBuffer peak_normalize(const AudioBuffer& buffer, double target_dbfs = -1.0);

/// Samples covering [start_frame, end_frame) of a frame grid with the given
/// frame duration, for a mono 16 kHz buffer. Sample index = round(time * 16000),
/// clipped to the buffer. The end time may exceed the buffer by at most one
/// frame duration.
AudioBuffer cut_segment(const AudioBuffer& buffer, std::size_t start_frame, std::size_t end_frame,
                        double frame_duration);

/// Min/max sample pairs over min(buckets, sample count) equal buckets.
std::vector<std::pair<float, float>> waveform_peaks(const AudioBuffer& buffer, std::size_t buckets = 800);

}  // namespace ctcprep
