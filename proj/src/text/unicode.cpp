// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "text/unicode.hpp"

#include <memory>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "ctcprep/error.hpp"

namespace ctcprep::unicode {

namespace {

icu::UnicodeString from_utf8(std::string_view s) {
    return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string to_utf8(const icu::UnicodeString& s) {
    std::string out;
    s.toUTF8String(out);
    return out;
}

void check(UErrorCode status, const char* what) {
    if (U_FAILURE(status)) {
        throw Error(ErrorCode::Internal, std::string(what) + ": " + u_errorName(status));
    }
}

}  // namespace

std::string normalize(std::string_view utf8, Form form) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm =
        form == Form::Nfc ? icu::Normalizer2::getNFCInstance(status) : icu::Normalizer2::getNFDInstance(status);
    check(status, "normalizer unavailable");
    icu::UnicodeString out = norm->normalize(from_utf8(utf8), status);
    check(status, "normalization failed");
    return to_utf8(out);
}

std::string to_lower(std::string_view utf8) {
    icu::UnicodeString s = from_utf8(utf8);
    s.toLower(icu::Locale::getRoot());
    return to_utf8(s);
}

std::u32string decode(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    const auto* p = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto len = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < len) {
        UChar32 c;
        U8_NEXT(p, i, len, c);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

std::string encode(char32_t cp) {
    uint8_t buf[4];
    int32_t n = 0;
    UBool err = false;
    U8_APPEND(buf, n, 4, static_cast<UChar32>(cp), err);
    if (err) return "\xEF\xBF\xBD";
    return std::string(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string encode(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t c : cps) out += encode(c);
    return out;
}

bool is_punctuation(char32_t cp) {
    switch (cp) {
    case U':': case U';': case U'!': case U'?': case U'(': case U')':
    case U'[': case U']': case U'"': case U'\'':
        return true;
    default:
        return u_ispunct(static_cast<UChar32>(cp));
    }
}

bool is_decimal_digit(char32_t cp) { return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER; }

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_combining_mark(char32_t cp) {
    const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
    return (mask & U_GC_M_MASK) != 0;
}

std::vector<std::string> graphemes(std::string_view utf8) {
    std::vector<std::string> out;
    if (utf8.empty()) return out;
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    check(status, "grapheme iterator unavailable");
    const icu::UnicodeString text = from_utf8(utf8);
    it->setText(text);
    int32_t start = it->first();
    for (int32_t end = it->next(); end != icu::BreakIterator::DONE; start = end, end = it->next()) {
        out.push_back(to_utf8(text.tempSubStringBetween(start, end)));
    }
    return out;
}

}  // namespace ctcprep::unicode
