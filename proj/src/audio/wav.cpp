// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ctcprep/audio.hpp"
#include "ctcprep/error.hpp"

namespace ctcprep {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, const std::string& source) : bytes_(bytes), source_(source) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n) throw ParseError::at_offset(source_, pos_, std::string("truncated ") + what);
    }
    std::string tag() {
        need(4, "chunk tag");
        std::string t(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
        pos_ += 4;
        return t;
    }
    std::uint16_t u16() {
        need(2, "field");
        std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4, "field");
        std::uint32_t v = static_cast<std::uint32_t>(bytes_[pos_]) | (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8) |
                          (static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 16) |
                          (static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24);
        pos_ += 4;
        return v;
    }
    void skip(std::size_t n) { pos_ += std::min(n, remaining()); }
    const std::uint8_t* here() const { return bytes_.data() + pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    const std::string& source_;
    std::size_t pos_ = 0;
};

bool looks_like_mp3(std::span<const std::uint8_t> b) {
    if (b.size() >= 3 && b[0] == 'I' && b[1] == 'D' && b[2] == '3') return true;
    return b.size() >= 2 && b[0] == 0xFF && (b[1] & 0xE0) == 0xE0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<float> samples, std::uint32_t sample_rate, std::uint16_t channels)
    : samples_(std::move(samples)), sample_rate_(sample_rate), channels_(channels) {
    if (sample_rate_ == 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    if (channels_ == 0) throw Error(ErrorCode::InvalidArgument, "channel count must be at least 1");
    if (samples_.size() % channels_ != 0) {
        throw Error(ErrorCode::InvalidArgument, "sample count is not a multiple of the channel count");
    }
}

AudioBuffer parse_wav(std::span<const std::uint8_t> bytes, const std::string& source) {
    if (looks_like_mp3(bytes)) {
        throw Error(ErrorCode::UnsupportedFormat,
                    source + ": MP3 input is not supported; convert to WAV first (e.g. ffmpeg -i in.mp3 -ac 1 -ar 16000 out.wav)");
    }
    Reader r(bytes, source);
    if (r.tag() != "RIFF") throw ParseError::at_offset(source, 0, "missing RIFF magic");
    r.u32();
    if (r.tag() != "WAVE") throw ParseError::at_offset(source, 8, "missing WAVE form type");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
    std::uint32_t rate = 0;
    while (r.remaining() >= 8) {
        const std::size_t chunk_at = r.pos();
        const std::string id = r.tag();
        const std::uint32_t size = r.u32();
        if (id == "fmt ") {
            if (size < 16) throw ParseError::at_offset(source, chunk_at, "fmt chunk shorter than 16 bytes");
            r.need(size, "fmt chunk");
            const std::size_t body = r.pos();
            format = r.u16();
            channels = r.u16();
            rate = r.u32();
            r.u32();
            block_align = r.u16();
            bits = r.u16();
            if (format == kFormatExtensible) {
                if (size < 40) throw ParseError::at_offset(source, chunk_at, "extensible fmt chunk too short");
                r.skip(8);
                format = r.u16();  // first two bytes of the sub-format GUID
            }
            r.skip(size - (r.pos() - body));
            if (size % 2) r.skip(1);
            have_fmt = true;
            if (channels == 0) throw ParseError::at_offset(source, body + 2, "zero channels");
            if (rate == 0) throw ParseError::at_offset(source, body + 4, "zero sample rate");
        } else if (id == "data") {
            if (!have_fmt) throw ParseError::at_offset(source, chunk_at, "data chunk before fmt chunk");
            const bool pcm16 = format == kFormatPcm && bits == 16;
            const bool f32 = format == kFormatFloat && bits == 32;
            if (!pcm16 && !f32) {
                throw Error(ErrorCode::UnsupportedFormat, source + ": unsupported WAV encoding (format " +
                                                              std::to_string(format) + ", " + std::to_string(bits) +
                                                              " bits); expected PCM-16 or float-32");
            }
            if (block_align != channels * (bits / 8)) {
                throw ParseError::at_offset(source, chunk_at, "block alignment does not match channels x sample size");
            }
            const std::size_t available = std::min<std::size_t>(size, r.remaining());
            const std::size_t bytes_per = bits / 8;
            std::size_t count = available / bytes_per;
            count -= count % channels;
            std::vector<float> samples(count);
            const std::uint8_t* p = r.here();
            for (std::size_t i = 0; i < count; ++i) {
                if (pcm16) {
                    auto v = static_cast<std::int16_t>(p[2 * i] | (p[2 * i + 1] << 8));
                    samples[i] = static_cast<float>(v) / 32768.0f;
                } else {
                    std::uint32_t u = static_cast<std::uint32_t>(p[4 * i]) | (static_cast<std::uint32_t>(p[4 * i + 1]) << 8) |
                                      (static_cast<std::uint32_t>(p[4 * i + 2]) << 16) |
                                      (static_cast<std::uint32_t>(p[4 * i + 3]) << 24);
                    float f;
                    std::memcpy(&f, &u, sizeof f);
                    samples[i] = std::isfinite(f) ? std::clamp(f, -1.0f, 1.0f) : 0.0f;
                }
            }
            return AudioBuffer(std::move(samples), rate, channels);
        } else {
            r.skip(size + (size % 2));
        }
    }
    throw ParseError::at_offset(source, r.pos(), have_fmt ? "no data chunk" : "no fmt chunk");
}

AudioBuffer load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_wav(bytes, path);
}

std::vector<std::uint8_t> encode_wav_pcm16(const AudioBuffer& buffer) {
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(buffer.samples().size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_bytes);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, kFormatPcm);
    put_u16(out, buffer.channels());
    put_u32(out, buffer.sample_rate());
    put_u32(out, buffer.sample_rate() * buffer.channels() * 2u);
    put_u16(out, static_cast<std::uint16_t>(buffer.channels() * 2));
    put_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_bytes);
    for (float s : buffer.samples()) {
        const double scaled = std::round(std::clamp(static_cast<double>(s), -1.0, 1.0) * 32768.0);
        const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
        put_u16(out, static_cast<std::uint16_t>(v));
    }
    return out;
}

void save_wav(const AudioBuffer& buffer, const std::string& path) {
    const auto bytes = encode_wav_pcm16(buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace ctcprep
