// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <random>
#include <set>

#include "ctcprep/error.hpp"
#include "ctcprep/textnorm.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace ctcprep;

namespace {

// Random strings drawn from a pool that exercises punctuation, digits,
// combining marks, non-Latin scripts and odd whitespace.
std::string random_text(std::mt19937_64& rng) {
    static const std::vector<std::string> pool{
        "a", "B", "z", "Ọ", "ụ", "e\xCC\x81", "ñ", " ", "  ", "\t", "\xC2\xA0", ",", ".", "!", "?", ":", ";",
        "(", ")", "[", "]", "\"", "'", "\xE2\x80\x9C", "\xE2\x80\x94", "\xC2\xBF", "1", "9", "\xD9\xA3",
        "\xCE\xA3", "\xD0\x96", "ß", "\xE1\xBA\xB8", "-", "_", "\xE3\x80\x82", "\xE0\xA4\x95\xE0\xA5\x8D"};
    std::uniform_int_distribution<std::size_t> len(0, 12), pick(0, pool.size() - 1);
    std::string s;
    for (std::size_t i = len(rng); i > 0; --i) s += pool[pick(rng)];
    return s;
}

// The built-in table only produces ASCII letters.
bool is_romanized_token(const std::string& tok) {
    if (tok == "|") return true;
    for (char c : tok) {
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
    }
    return !tok.empty();
}

}  // namespace

TEST_SUITE("textnorm.normalize") {
    TEST_CASE("documented examples") {
        CHECK(normalize_line("Okwu, 12 abụ.") == "okwu abụ");
        CHECK(normalize_line("   ") == "");
        CHECK(normalize_line("Jesu (Mark 1:1)?") == "jesu mark");
    }

    TEST_CASE("ASCII symbol set and Unicode punctuation are removed") {
        CHECK(normalize_line("a:b;c!d?e(f)g[h]i\"j'k") == "abcdefghijk");
        CHECK(normalize_line("\xE2\x80\x9Cquoted\xE2\x80\x9D \xC2\xBFqu\xC3\xA9?") == "quoted qué");
        CHECK(normalize_line("well-known_word") == "wellknownword");
    }

    TEST_CASE("Unicode decimal digits are removed, other numerals kept") {
        CHECK(normalize_line("x\xD9\xA3y") == "xy");      // ARABIC-INDIC DIGIT THREE
        CHECK(normalize_line("\xE2\x85\xA0") == "\xE2\x85\xB0");  // ROMAN NUMERAL ONE (Nl) lowercases
    }

    TEST_CASE("whitespace of any kind collapses to one space") {
        CHECK(normalize_line("a\t\tb\xC2\xA0\xC2\xA0" "c\r\n") == "a b c");
    }

    TEST_CASE("full Unicode lowercasing and NFC output") {
        CHECK(normalize_line("ỌKỤ") == "ọkụ");
        CHECK(normalize_line("\xCE\xA3\xCE\x9F\xCE\xA6\xCE\x99\xCE\x91") == "\xCF\x83\xCE\xBF\xCF\x86\xCE\xB9\xCE\xB1");
        CHECK(normalize_line("e\xCC\x81") == "\xC3\xA9");  // decomposed é composes
    }

    TEST_CASE("lowercasing can be disabled") {
        NormalizeOptions keep_case;
        keep_case.lowercase = false;
        CHECK(normalize_line("Okwu, ABỤ.", keep_case) == "Okwu ABỤ");
    }

    TEST_CASE("idempotent on random input") {
        std::mt19937_64 rng(71);
        for (int i = 0; i < 500; ++i) {
            const std::string once = normalize_line(random_text(rng));
            CHECK(normalize_line(once) == once);
            CHECK(once.find("  ") == std::string::npos);
            if (!once.empty()) {
                CHECK(once.front() != ' ');
                CHECK(once.back() != ' ');
            }
            for (char c : once) CHECK(!(c >= '0' && c <= '9'));
        }
    }

    TEST_CASE("invalid UTF-8 does not throw") {
        CHECK_NOTHROW(normalize_line("ab\xFF\xFE" "cd"));
    }
}

TEST_SUITE("textnorm.corpus") {
    TEST_CASE("duplicates and empties are dropped, first occurrence wins") {
        const std::vector<std::string> in{"A b.", "a b", "c"};
        CHECK(normalize_corpus(in) == std::vector<std::string>{"a b", "c"});
        CHECK(normalize_corpus(std::vector<std::string>{}).empty());
        const std::vector<std::string> empties{"1.", "!!"};
        CHECK(normalize_corpus(empties).empty());
    }

    TEST_CASE("output has no duplicates or empty lines") {
        std::mt19937_64 rng(72);
        std::vector<std::string> lines;
        for (int i = 0; i < 300; ++i) lines.push_back(random_text(rng));
        const auto out = normalize_corpus(lines);
        std::set<std::string> seen;
        for (const auto& l : out) {
            CHECK(!l.empty());
            CHECK(seen.insert(l).second);
        }
    }
}

TEST_SUITE("textnorm.graphemes") {
    TEST_CASE("combining sequences stay atomic") {
        const auto g = grapheme_clusters("o\xCC\xA3ku\xCC\xA3");  // decomposed ọkụ
        CHECK(g == std::vector<std::string>{"o\xCC\xA3", "k", "u\xCC\xA3"});
        CHECK(grapheme_clusters("").empty());
        CHECK(grapheme_clusters("a b") == std::vector<std::string>{"a", " ", "b"});
    }
}

TEST_SUITE("textnorm.romanize") {
    TEST_CASE("documented examples") {
        CHECK(romanize("ọ") == "o");
        CHECK(romanize("abụ") == "a b u");
        CHECK(romanize("a b") == "a | b");
        CHECK(romanize("") == "");
    }

    TEST_CASE("override table maps letters that survive diacritic stripping") {
        CHECK(romanize("ɛŋ") == "e n");
        CHECK(romanize("straße") == "s t r a s s e");  // ß expands to two letters, then spaced
        RomanizeTable t = RomanizeTable::empty();
        CHECK(romanize("ɛa", t) == "a");  // unmapped code points are dropped
        t.set("ɛ", "E");
        CHECK(romanize("ɛa", t) == "E a");
    }

    TEST_CASE("table file parsing") {
        fixtures::TempDir dir;
        fixtures::write_text(dir.file("t.tsv"), "# comment\n\xC9\x9B\te\n\n\xC5\x8B\tng\n");
        const RomanizeTable t = RomanizeTable::load(dir.file("t.tsv"));
        CHECK(t.size() == 2);
        REQUIRE(t.find("ŋ") != nullptr);
        CHECK(*t.find("ŋ") == "ng");
        CHECK_THROWS_AS(RomanizeTable::parse("no tab here\n"), Error);
        CHECK_THROWS_AS(RomanizeTable::load(dir.file("missing.tsv")), Error);
    }

    TEST_CASE("output holds only ASCII letters, spaces and the delimiter") {
        std::mt19937_64 rng(73);
        const RomanizeTable table = RomanizeTable::defaults();
        for (int i = 0; i < 300; ++i) {
            const std::string r = romanize(normalize_line(random_text(rng)), table);
            std::size_t start = 0;
            while (start < r.size()) {
                std::size_t end = r.find(' ', start);
                if (end == std::string::npos) end = r.size();
                CHECK(end > start);  // no doubled spaces
                CHECK(is_romanized_token(r.substr(start, end - start)));
                start = end + 1;
            }
        }
    }
}

TEST_SUITE("textnorm.vocab") {
    TEST_CASE("construction rule") {
        const std::vector<std::string> corpus{"ab a"};
        CHECK(build_vocab(corpus).tokens() == std::vector<std::string>{"<pad>", "<unk>", "|", "a", "b"});
        const std::vector<std::string> dotted{"ọ"};
        CHECK(build_vocab(dotted).tokens() == std::vector<std::string>{"<pad>", "<unk>", "|", "ọ"});
        const std::vector<std::string> doubled{"ab a", "ab a"};
        CHECK(build_vocab(doubled) == build_vocab(corpus));
        try {
            build_vocab(std::vector<std::string>{});
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyInput);
        }
    }

    TEST_CASE("encode with delimiter and unknown") {
        const std::vector<std::string> corpus{"ab a"};
        const Vocab v = build_vocab(corpus);
        CHECK(encode_labels("ab", v) == LabelSequence{3, 4});
        CHECK(encode_labels("a b", v) == LabelSequence{3, 2, 4});
        CHECK(encode_labels("az", v) == LabelSequence{3, 1});
        CHECK(decode_labels(LabelSequence{3, 2, 4}, v) == "a b");
    }

    TEST_CASE("encoding a line against its own vocabulary never yields unknown or blank") {
        std::mt19937_64 rng(74);
        for (int i = 0; i < 200; ++i) {
            const std::string x = normalize_line(random_text(rng));
            if (x.empty()) continue;
            const Vocab v = build_vocab(std::vector<std::string>{x});
            for (Token t : encode_labels(x, v)) {
                CHECK(t != kUnknownIndex);
                CHECK(t != kBlankIndex);
            }
            CHECK(decode_labels(encode_labels(x, v), v) == x);
        }
    }

    TEST_CASE("file round-trip and validation") {
        fixtures::TempDir dir;
        const Vocab v = build_vocab(std::vector<std::string>{"ọkụ abụ"});
        v.save(dir.file("vocab.txt"));
        CHECK(Vocab::load(dir.file("vocab.txt")) == v);
        CHECK(fixtures::read_text(dir.file("vocab.txt")).rfind("<pad>\n<unk>\n|\n", 0) == 0);
        CHECK(v.find("ụ").has_value());
        CHECK_FALSE(v.find("z").has_value());
        CHECK_THROWS_AS(Vocab(std::vector<std::string>{"<unk>", "<pad>", "|"}), Error);
        CHECK_THROWS_AS(Vocab(std::vector<std::string>{"<pad>", "<unk>", "|", "a", "a"}), Error);
    }
}
