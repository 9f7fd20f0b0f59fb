// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctcprep::unicode {

enum class Form { Nfc, Nfd };

std::string normalize(std::string_view utf8, Form form);
std::string to_lower(std::string_view utf8);

/// Decodes UTF-8 into code points; ill-formed sequences become U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
std::string encode(char32_t cp);

bool is_punctuation(char32_t cp);
bool is_decimal_digit(char32_t cp);
bool is_whitespace(char32_t cp);
bool is_combining_mark(char32_t cp);

std::vector<std::string> graphemes(std::string_view utf8);

}  // namespace ctcprep::unicode
