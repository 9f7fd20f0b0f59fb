// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <functional>
#include <optional>

#include "ctcprep/config.hpp"
#include "ctcprep/error.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace ctcprep;

namespace {

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("defaults") {
        const ToolkitConfig c;
        CHECK(c.frame_duration == 0.02);
        CHECK(c.split.ratio == 0.8);
        CHECK(c.review_port == 8517);
        CHECK(c.filter.min_duration == 1.0);
        CHECK_FALSE(c.filter.require_tag_high);
        CHECK_NOTHROW(c.validate());
    }

    TEST_CASE("parse with comments, blanks and disabled bounds") {
        const auto c = ToolkitConfig::parse(
            "# settings\n"
            "split.ratio = 0.75   # trailing comment\n"
            "\n"
            "filter.max_duration = off\n"
            "filter.require_tag_high = yes\n"
            "split.seed=42\n"
            "audio.segment_dir = clips/out\n");
        CHECK(c.split.ratio == 0.75);
        CHECK_FALSE(c.filter.max_duration.has_value());
        CHECK(c.filter.require_tag_high);
        CHECK(c.split.seed == 42);
        CHECK(c.segment_dir == "clips/out");
    }

    TEST_CASE("get renders what set accepts") {
        ToolkitConfig c;
        c.set("filter.min_word_rate", "off");
        c.set("align.wildcard_logprob", "-1.25");
        c.set("split.per_chapter", "true");
        ToolkitConfig d;
        for (const auto& key : ToolkitConfig::keys()) d.set(key, c.get(key));
        for (const auto& key : ToolkitConfig::keys()) CHECK(d.get(key) == c.get(key));
        CHECK(c.get("filter.min_word_rate") == "off");
        CHECK(c.get("split.per_chapter") == "true");
        CHECK(c.get("review.port") == "8517");
    }

    TEST_CASE("bad keys and values are config errors with a line number") {
        CHECK(code_of([] { ToolkitConfig::parse("nope = 1\n"); }) == ErrorCode::Config);
        CHECK(code_of([] { ToolkitConfig::parse("split.ratio = abc\n"); }) == ErrorCode::Config);
        CHECK(code_of([] { ToolkitConfig::parse("split.ratio = 1.5\n"); }) == ErrorCode::Config);
        CHECK(code_of([] { ToolkitConfig::parse("filter.min_duration = 40\n"); }) == ErrorCode::Config);
        CHECK(code_of([] { ToolkitConfig::parse("text.lowercase = maybe\n"); }) == ErrorCode::Config);
        CHECK(code_of([] { ToolkitConfig::parse("review.port = 70000\n"); }) == ErrorCode::Config);
        CHECK(code_of([] { ToolkitConfig::parse("just text\n"); }) == ErrorCode::Parse);
        CHECK(code_of([] { ToolkitConfig().get("nope"); }) == ErrorCode::Config);
        try {
            ToolkitConfig::parse("\n\nsplit.seed = -1\n", "c.conf");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("c.conf:3") != std::string::npos);
        }
    }

    TEST_CASE("file loading and romanize table override") {
        fixtures::TempDir dir;
        fixtures::write_text(dir.file("t.tsv"), "\xC9\x9B\tx\n");
        fixtures::write_text(dir.file("c.conf"), "romanize.table = " + dir.file("t.tsv") + "\n");
        const auto c = ToolkitConfig::load(dir.file("c.conf"));
        CHECK(romanize("\xC9\x9B", c.romanize_table()) == "x");
        CHECK(romanize("\xC9\x9B", ToolkitConfig().romanize_table()) == "e");
        CHECK(code_of([&] { ToolkitConfig::load(dir.file("missing.conf")); }) == ErrorCode::Io);
    }
}
