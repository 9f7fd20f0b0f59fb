// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctcprep::util {

std::string read_file(const std::string& path);

/// Writes via a temporary sibling and rename so readers never see a torn file.
void write_file(const std::string& path, std::string_view contents);

/// Splits on LF; a trailing CR is dropped from each line. A final empty
/// line after the last LF is not reported.
std::vector<std::string_view> split_lines(std::string_view text);

/// Splits on runs of ASCII spaces and tabs.
std::vector<std::string_view> split_fields(std::string_view line);

std::string_view trim(std::string_view s);

/// Shortest round-trip decimal (fixed notation) for a finite double.
std::string format_decimal(double v);

}  // namespace ctcprep::util
