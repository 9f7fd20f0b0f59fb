// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstring>
#include <numeric>

#include "ctcprep/audio.hpp"
#include "ctcprep/error.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ctcprep;

namespace {

double mean_square(const std::vector<float>& x, std::size_t skip = 0) {
    double acc = 0.0;
    for (std::size_t i = skip; i + skip < x.size(); ++i) acc += double(x[i]) * x[i];
    return acc / double(x.size() - 2 * skip);
}

float peak(const AudioBuffer& b) {
    float m = 0.0f;
    for (float s : b.samples()) m = std::max(m, std::abs(s));
    return m;
}

std::vector<std::uint8_t> bytes_of(const std::string& path) {
    const std::string s = fixtures::read_text(path);
    return {s.begin(), s.end()};
}

void put_u32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

TEST_SUITE("audio.wav") {
    TEST_CASE("one second of 16 kHz mono silence") {
        fixtures::TempDir dir;
        oracle::write_pcm16_wav(dir.file("s.wav"), std::vector<std::int16_t>(16000, 0), 16000, 1);
        const AudioBuffer b = load_wav(dir.file("s.wav"));
        CHECK(b.samples().size() == 16000);
        CHECK(b.sample_rate() == 16000);
        CHECK(b.channels() == 1);
        CHECK(std::all_of(b.samples().begin(), b.samples().end(), [](float s) { return s == 0.0f; }));
        CHECK(b.is_model_ready());
        CHECK(b.duration() == 1.0);
    }

    TEST_CASE("PCM-16 scaling maps -32768 to exactly -1") {
        fixtures::TempDir dir;
        oracle::write_pcm16_wav(dir.file("x.wav"), {-32768, 32767, 16384, 0}, 8000, 1);
        const AudioBuffer b = load_wav(dir.file("x.wav"));
        CHECK(b.samples()[0] == -1.0f);
        CHECK(b.samples()[1] == 32767.0f / 32768.0f);
        CHECK(b.samples()[2] == 0.5f);
    }

    TEST_CASE("stereo keeps interleaving") {
        fixtures::TempDir dir;
        oracle::write_pcm16_wav(dir.file("st.wav"), {100, -100, 200, -200, 300, -300}, 44100, 2);
        const AudioBuffer b = load_wav(dir.file("st.wav"));
        CHECK(b.channels() == 2);
        CHECK(b.samples().size() == 6);
        CHECK(b.frames() == 3);
        CHECK(b.samples()[1] == -100.0f / 32768.0f);
        CHECK_FALSE(b.is_model_ready());
    }

    TEST_CASE("encode then parse round-trips PCM-16 exactly") {
        std::vector<float> s;
        for (int v = -32768; v < 32768; v += 97) s.push_back(static_cast<float>(v) / 32768.0f);
        const AudioBuffer b(s, 16000, 1);
        const auto bytes = encode_wav_pcm16(b);
        CHECK(std::memcmp(bytes.data(), "RIFF", 4) == 0);
        CHECK(parse_wav(bytes) == b);
    }

    TEST_CASE("encoding clips out-of-range samples") {
        const AudioBuffer b({2.0f, -2.0f}, 16000, 1);
        const AudioBuffer back = parse_wav(encode_wav_pcm16(b));
        CHECK(back.samples()[0] == 32767.0f / 32768.0f);
        CHECK(back.samples()[1] == -1.0f);
    }

    TEST_CASE("float32 and extensible headers are read") {
        fixtures::TempDir dir;
        // Float32 mono: build by hand.
        std::vector<std::uint8_t> b(44 + 8, 0);
        std::memcpy(&b[0], "RIFF", 4);
        put_u32(b, 4, 36 + 8);
        std::memcpy(&b[8], "WAVEfmt ", 8);
        put_u32(b, 16, 16);
        b[20] = 3;  // IEEE float
        b[22] = 1;
        put_u32(b, 24, 16000);
        put_u32(b, 28, 64000);
        b[32] = 4;
        b[34] = 32;
        std::memcpy(&b[36], "data", 4);
        put_u32(b, 40, 8);
        const float vals[2] = {0.25f, -0.75f};
        std::memcpy(&b[44], vals, 8);
        const AudioBuffer f = parse_wav(b);
        CHECK(f.samples() == std::vector<float>{0.25f, -0.75f});
    }

    TEST_CASE("malformed headers report a byte offset") {
        fixtures::TempDir dir;
        oracle::write_pcm16_wav(dir.file("ok.wav"), {1, 2, 3, 4}, 16000, 1);
        auto good = bytes_of(dir.file("ok.wav"));

        auto message = [](std::vector<std::uint8_t> b) {
            try {
                parse_wav(b, "f.wav");
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::Parse);
                return std::string(e.what());
            }
            return std::string("no error");
        };
        auto bad = good;
        bad[0] = 'X';
        CHECK(message(bad).find("byte offset 0") != std::string::npos);
        bad = good;
        bad[8] = 'X';
        CHECK(message(bad).find("byte offset 8") != std::string::npos);
        bad = good;
        bad.resize(30);
        CHECK(message(bad).find("byte offset") != std::string::npos);
        CHECK(message({}).find("byte offset 0") != std::string::npos);
    }

    TEST_CASE("unsupported encodings and MP3 input are rejected") {
        fixtures::TempDir dir;
        oracle::write_pcm16_wav(dir.file("ok.wav"), {1, 2}, 16000, 1);
        auto b = bytes_of(dir.file("ok.wav"));
        b[20] = 6;  // A-law
        try {
            parse_wav(b);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnsupportedFormat);
        }
        const std::vector<std::uint8_t> id3{'I', 'D', '3', 4, 0, 0, 0, 0, 0, 0, 0, 0};
        try {
            parse_wav(id3, "song.mp3");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnsupportedFormat);
            CHECK(std::string(e.what()).find("WAV") != std::string::npos);
        }
        CHECK_THROWS_AS(load_wav(dir.file("missing.wav")), Error);
    }

    TEST_CASE("save_wav writes a loadable file") {
        fixtures::TempDir dir;
        const AudioBuffer b({0.5f, -0.5f, 0.25f}, 16000, 1);
        save_wav(b, dir.file("out.wav"));
        CHECK(load_wav(dir.file("out.wav")) == b);
    }
}

TEST_SUITE("audio.resample") {
    TEST_CASE("mono 16 kHz input is returned unchanged") {
        const AudioBuffer b(oracle::sine(300, 16000, 1000), 16000, 1);
        CHECK(to_mono_16k(b) == b);
        CHECK(to_mono_16k(to_mono_16k(b)) == b);
    }

    TEST_CASE("440 Hz at 44.1 kHz keeps its spectral peak") {
        const AudioBuffer in(oracle::sine(440, 44100, 44100), 44100, 1);
        const AudioBuffer out = to_mono_16k(in);
        CHECK(out.sample_rate() == 16000);
        CHECK(std::abs(static_cast<long>(out.samples().size()) - 16000) <= 1);
        CHECK(std::abs(oracle::dft_peak_hz(out.samples(), 16000, 300, 600) - 440) <= 1);
    }

    TEST_CASE("opposite stereo channels cancel") {
        std::vector<float> s;
        for (float v : oracle::sine(500, 22050, 4000)) {
            s.push_back(v);
            s.push_back(-v);
        }
        const AudioBuffer out = to_mono_16k(AudioBuffer(s, 22050, 2));
        for (float v : out.samples()) CHECK(std::abs(v) <= 1e-6);
    }

    TEST_CASE("tone energy is preserved within 1%") {
        for (std::uint32_t rate : {8000u, 22050u, 44100u, 48000u}) {
            for (double hz : {100.0, 1000.0, 3000.0}) {
                const auto in = oracle::sine(hz, rate, rate);
                const auto out = resample(in, rate, 16000);
                // Skip the filter's edge transients.
                CHECK(mean_square(out, 400) == doctest::Approx(mean_square(in, rate / 40)).epsilon(0.01));
            }
        }
    }

    TEST_CASE("output length is round(N * to / from)") {
        for (std::size_t n : {1u, 7u, 441u, 1000u, 44101u}) {
            const std::vector<float> in(n, 0.1f);
            CHECK(resample(in, 44100, 16000).size() == static_cast<std::size_t>(std::llround(n * 16000.0 / 44100.0)));
        }
        CHECK(resample(std::vector<float>{}, 44100, 16000).empty());
        CHECK_THROWS_AS(resample(std::vector<float>{0.0f}, 0, 16000), Error);
    }

    TEST_CASE("a DC signal stays at its level") {
        const std::vector<float> in(8000, 0.25f);
        const auto out = resample(in, 8000, 16000);
        for (std::size_t i = 200; i + 200 < out.size(); ++i) CHECK(out[i] == doctest::Approx(0.25).epsilon(1e-4));
    }

    TEST_CASE("content above the new Nyquist is attenuated") {
        const auto in = oracle::sine(10000, 44100, 44100);
        const auto out = resample(in, 44100, 16000);
        CHECK(mean_square(out, 400) < 1e-3 * mean_square(in, 1000));
    }
}

TEST_SUITE("audio.normalize") {
    TEST_CASE("half-scale peak is raised to -1 dBFS") {
        const AudioBuffer b({0.5f, -0.25f, 0.1f}, 16000, 1);
        const AudioBuffer n = peak_normalize(b, -1.0);
        const double target = std::pow(10.0, -1.0 / 20.0);
        CHECK(std::abs(peak(n) - target) <= 1e-6);
        CHECK(n.samples()[1] == doctest::Approx(-0.25 * target / 0.5).epsilon(1e-6));
    }

    TEST_CASE("all-zero input is unchanged") {
        const AudioBuffer z(std::vector<float>(100, 0.0f), 16000, 1);
        CHECK(peak_normalize(z) == z);
    }

    TEST_CASE("idempotent at a fixed target") {
        const AudioBuffer b(oracle::sine(220, 16000, 3000, 0.3), 16000, 1);
        const AudioBuffer once = peak_normalize(b);
        const AudioBuffer twice = peak_normalize(once);
        for (std::size_t i = 0; i < once.samples().size(); ++i) {
            CHECK(std::abs(once.samples()[i] - twice.samples()[i]) <= 1e-6);
        }
    }
}

TEST_SUITE("audio.cut") {
    const AudioBuffer kTwoSeconds(std::vector<float>(32000), 16000, 1);

    AudioBuffer ramp(std::size_t n) {
        std::vector<float> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<float>(i) / static_cast<float>(n);
        return AudioBuffer(s, 16000, 1);
    }

    TEST_CASE("whole span returns the whole buffer") {
        const AudioBuffer b = ramp(32000);
        CHECK(cut_segment(b, 0, 100, 0.02) == b);
    }

    TEST_CASE("frames [2, 5) at 20 ms are samples [640, 1600)") {
        const AudioBuffer b = ramp(32000);
        const AudioBuffer c = cut_segment(b, 2, 5, 0.02);
        REQUIRE(c.samples().size() == 960);
        CHECK(c.samples().front() == b.samples()[640]);
        CHECK(c.samples().back() == b.samples()[1599]);
    }

    TEST_CASE("adjacent spans concatenate to the joint span") {
        const AudioBuffer b = ramp(16000 + 123);
        for (std::size_t a = 0; a < 20; a += 3) {
            for (std::size_t m = a + 1; m < 30; m += 4) {
                for (std::size_t e = m + 1; e <= 51; e += 5) {
                    auto left = cut_segment(b, a, m, 0.02).samples();
                    const auto right = cut_segment(b, m, e, 0.02).samples();
                    left.insert(left.end(), right.begin(), right.end());
                    CHECK(left == cut_segment(b, a, e, 0.02).samples());
                }
            }
        }
    }

    TEST_CASE("final-frame slack is allowed, beyond it is out of range") {
        const AudioBuffer b = ramp(16010);  // 1.000625 s
        CHECK(cut_segment(b, 49, 51, 0.02).samples().size() == 16010 - 15680);
        try {
            cut_segment(b, 49, 52, 0.02);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::OutOfRange);
        }
        CHECK_THROWS_AS(cut_segment(b, 3, 3, 0.02), Error);
        CHECK_THROWS_AS(cut_segment(AudioBuffer({0.0f, 0.0f}, 8000, 1), 0, 1, 0.02), Error);
    }

    TEST_CASE("waveform peaks") {
        const AudioBuffer z(std::vector<float>(5000), 16000, 1);
        const auto p = waveform_peaks(z, 800);
        CHECK(p.size() == 800);
        for (auto [mn, mx] : p) CHECK((mn == 0.0f && mx == 0.0f));
        CHECK(waveform_peaks(AudioBuffer(std::vector<float>(10, 0.5f), 16000, 1), 800).size() == 10);
        const auto r = waveform_peaks(ramp(1000), 10);
        CHECK(r[0].first == 0.0f);
        CHECK(r[9].second == 999.0f / 1000.0f);
    }
}
