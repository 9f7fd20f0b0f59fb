// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Drives the ctcprep executable end to end. The binary path comes from the
// CTCPREP_CLI environment variable.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <arpa/inet.h>
#include <netinet/in.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <thread>

#include "ctcprep/audio.hpp"
#include "ctcprep/corpus.hpp"
#include "ctcprep/review.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "oracles.hpp"

extern char** environ;

using namespace ctcprep;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

std::string cli() {
    const char* p = std::getenv("CTCPREP_CLI");
    REQUIRE_MESSAGE(p != nullptr, "CTCPREP_CLI is not set");
    return p;
}

Run run(const fixtures::TempDir& dir, const std::string& args) {
    const std::string out = dir.file(".stdout"), err = dir.file(".stderr");
    const std::string cmd = "cd '" + dir.path().string() + "' && '" + cli() + "' " + args + " > '" + out + "' 2> '" + err + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = fixtures::read_text(out);
    r.err = fixtures::read_text(err);
    return r;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const char* kRelaxed =
    "filter.min_duration = off\n"
    "filter.min_word_rate = off\n"
    "filter.max_word_rate = off\n"
    "filter.min_char_rate = off\n"
    "filter.max_char_rate = off\n";

// Two chapters in the source naming schemes, their synthetic emissions and
// matching recordings (44.1 kHz stereo, so segmenting has to resample).
void build_inputs(const fixtures::TempDir& dir) {
    fixtures::write_text(dir.file("text/ikkNT_070_MAT_01_read.txt"), "Ab c.\nC ab!\n");
    fixtures::write_text(dir.file("text/Mark_05.txt"), "Ba.\n\n12\nCab\n");
    fixtures::write_text(dir.file("all.txt"), "Ab c.\nC ab!\nBa.\n12\nCab\n");
    std::filesystem::create_directories(dir.file("audio"));
    std::filesystem::create_directories(dir.file("emissions"));
    const Vocab vocab = build_vocab(std::vector<std::string>{"ab c", "c ab", "ba", "cab"});
    const std::vector<std::pair<std::string, std::string>> chapters{
        {"Matthew_01", "ab c c ab"}, {"Mark_05", "ba cab"}};
    for (const auto& [id, text] : chapters) {
        const LogProbMatrix em = synth_emissions(text, vocab, 10);
        save_emissions(em, dir.file("emissions/" + id + ".emissions"));
        const std::size_t samples = static_cast<std::size_t>(std::llround(em.num_frames() * 0.02 * 44100));
        std::vector<std::int16_t> pcm;
        for (std::size_t i = 0; i < samples; ++i) {
            const auto v = static_cast<std::int16_t>(8000 * std::sin(2 * 3.14159265358979 * 220 * i / 44100.0));
            pcm.push_back(v);
            pcm.push_back(v);
        }
        const std::string name = id == "Mark_05" ? "Mark_05.wav" : "B01__01_Matthew__IKKTBLN1DA.wav";
        oracle::write_pcm16_wav(dir.file("audio/" + name), pcm, 44100, 2);
    }
}

int free_port() {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ::close(fd);
    return ntohs(addr.sin_port);
}

}  // namespace

TEST_CASE("full corpus build through the command line") {
    fixtures::TempDir dir;
    build_inputs(dir);
    fixtures::write_text(dir.file("relaxed.conf"), kRelaxed);

    Run r = run(dir, "normalize -i all.txt -o norm.txt --vocab vocab.txt");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(fixtures::read_text(dir.file("norm.txt")) == "ab c\nc ab\nba\ncab\n");
    CHECK(fixtures::read_text(dir.file("vocab.txt")) == "<pad>\n<unk>\n|\na\nb\nc\n");

    r = run(dir, "pairs --audio-dir audio --text-dir text");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Mark_05\t") != std::string::npos);
    CHECK(r.out.find("Matthew_01\t") != std::string::npos);

    r = run(dir, "align --vocab vocab.txt --audio-dir audio --text-dir text --emissions-dir emissions -o out/manifest.jsonl");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto records = load_manifest(dir.file("out/manifest.jsonl"));
    REQUIRE(records.size() == 4);
    CHECK(records[0].id == "Mark_05_001");
    CHECK(records[1].id == "Mark_05_003");  // the digit-only line is skipped
    CHECK(records[2].id == "Matthew_01_001");
    // "ab c": 4 tokens of 10 frames from frame 0.
    CHECK(records[2].audio_start_sec == 0.0);
    CHECK(records[2].duration == doctest::Approx(0.8));

    r = run(dir, "segment -m out/manifest.jsonl");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (const auto& rec : records) {
        const AudioBuffer seg = load_wav(dir.file("out/" + rec.audio_filepath));
        CHECK(seg.sample_rate() == 16000);
        CHECK(seg.channels() == 1);
        CHECK(seg.samples().size() == static_cast<std::size_t>(std::llround(rec.duration * 16000)));
    }

    r = run(dir, "stats -m out/manifest.jsonl");
    CHECK(r.code == 0);

    r = run(dir, "filter -m out/manifest.jsonl -o out/strict.jsonl --rejected out/rejected.jsonl");
    REQUIRE(r.code == 0);
    CHECK(load_manifest(dir.file("out/strict.jsonl")).empty());
    CHECK(line_count(fixtures::read_text(dir.file("out/rejected.jsonl"))) == 4);

    r = run(dir, "--config relaxed.conf filter -m out/manifest.jsonl -o out/kept.jsonl");
    REQUIRE(r.code == 0);
    CHECK(load_manifest(dir.file("out/kept.jsonl")).size() == 4);

    r = run(dir, "manifest -m out/kept.jsonl --csv out/metadata.csv");
    CHECK(r.code == 2);  // splits not assigned yet
    CHECK(r.err.find("no split assigned") != std::string::npos);

    r = run(dir, "--seed 3 split -m out/kept.jsonl");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("train 3, test 1") != std::string::npos);
    const auto first_split = fixtures::read_text(dir.file("out/kept.jsonl"));
    REQUIRE(run(dir, "--seed 3 split -m out/kept.jsonl").code == 0);
    CHECK(fixtures::read_text(dir.file("out/kept.jsonl")) == first_split);

    r = run(dir, "manifest -m out/kept.jsonl --csv out/metadata.csv");
    REQUIRE(r.code == 0);
    const auto rows = parse_metadata_csv(fixtures::read_text(dir.file("out/metadata.csv")));
    CHECK(rows.size() == 4);

    std::string hyps;
    for (const auto& rec : records) hyps += rec.id + "\t" + rec.normalized_text + "\n";
    fixtures::write_text(dir.file("hyp.tsv"), hyps);
    r = run(dir, "eval -m out/kept.jsonl --hyp hyp.tsv --report out/report.jsonl");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("WER: 0.000000") != std::string::npos);
    CHECK(r.out.find("CER: 0.000000") != std::string::npos);
    CHECK(line_count(fixtures::read_text(dir.file("out/report.jsonl"))) == 5);
}

TEST_CASE("exit codes") {
    fixtures::TempDir dir;
    CHECK(run(dir, "").code == 1);
    CHECK(run(dir, "frobnicate").code == 1);
    CHECK(run(dir, "normalize -i missing.txt -o x.txt").code == 1);
    CHECK(run(dir, "split -m x.jsonl --ratio 3").code == 1);
    CHECK(run(dir, "--version").code == 0);

    fixtures::write_text(dir.file("bad.jsonl"), "{\"audio_start_sec\":0}\n");
    Run r = run(dir, "stats -m bad.jsonl");
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.jsonl:1") != std::string::npos);

    fixtures::write_text(dir.file("bad.conf"), "split.ratio = 7\n");
    fixtures::write_text(dir.file("a.txt"), "a\n");
    CHECK(run(dir, "--config bad.conf normalize -i a.txt -o b.txt").code == 2);

    fixtures::write_text(dir.file("m.jsonl"),
                         R"({"audio_start_sec":0,"audio_filepath":"a.wav","duration":1,"text":"a","normalized_text":"a","uroman_tokens":"a"})"
                         "\n");
    fixtures::write_text(dir.file("dup.tsv"), "a\tx\na\ty\n");
    CHECK(run(dir, "eval -m m.jsonl --hyp dup.tsv").code == 2);
}

TEST_CASE("review serve answers over HTTP and exits cleanly on SIGTERM") {
    fixtures::TempDir dir;
    fixtures::write_text(dir.file("m.jsonl"),
                         R"({"audio_start_sec":0,"audio_filepath":"a.wav","duration":1,"text":"a","normalized_text":"a","uroman_tokens":"a","x_id":"Mark_05_001"})"
                         "\n");
    const int port = free_port();
    const std::string bin = cli(), manifest = dir.file("m.jsonl"), port_text = std::to_string(port);
    std::vector<std::string> args{bin, "review", "serve", "-m", manifest, "--port", port_text};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    pid_t pid = 0;
    REQUIRE(posix_spawn(&pid, bin.c_str(), nullptr, nullptr, argv.data(), environ) == 0);

    httplib::Client client("127.0.0.1", port);
    httplib::Result stats;
    for (int i = 0; i < 100 && !stats; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        stats = client.Get("/api/stats");
    }
    REQUIRE(stats);
    CHECK(nlohmann::json::parse(stats->body)["total"] == 1);
    auto tag = client.Post("/api/segments/Mark_05_001/tag", R"({"tag":"High"})", "application/json");
    REQUIRE(tag);
    CHECK(tag->status == 200);

    ::kill(pid, SIGTERM);
    int status = 0;
    ::waitpid(pid, &status, 0);
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(load_tags(dir.file("m.jsonl.tags.jsonl")).at("Mark_05_001") == QualityTag::High);
}
