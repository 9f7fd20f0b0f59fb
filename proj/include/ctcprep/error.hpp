// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctcprep {

/// Failure categories shared by every module. The numeric values are
/// mirrored by the C API status codes, so append only.
enum class ErrorCode : int {
    InvalidArgument = 1,
    Io = 2,
    Parse = 3,
    InvalidLabel = 4,
    InfeasibleLabel = 5,
    IncompatibleBatch = 6,
    UnsupportedFormat = 7,
    OutOfRange = 8,
    Config = 9,
    EmptyInput = 10,
    InvalidRecord = 11,
    NotFound = 12,
    Gone = 13,
    Validation = 14,
    ChapterAlignment = 15,
    Internal = 99,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure that knows where it happened. `line` is 1-based; 0 means
/// the location is a byte offset instead.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);
    static ParseError at_offset(const std::string& source, std::size_t offset,
                                const std::string& what);

    std::size_t line() const noexcept { return line_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    ParseError(const std::string& source, std::size_t line, std::size_t offset,
               const std::string& message);
    std::size_t line_ = 0;
    std::size_t offset_ = 0;
};

}  // namespace ctcprep
