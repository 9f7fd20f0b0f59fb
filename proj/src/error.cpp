// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ctcprep/error.hpp"

namespace ctcprep {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Io: return "io error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::InvalidLabel: return "invalid label";
    case ErrorCode::InfeasibleLabel: return "infeasible label sequence";
    case ErrorCode::IncompatibleBatch: return "incompatible batch";
    case ErrorCode::UnsupportedFormat: return "unsupported format";
    case ErrorCode::OutOfRange: return "out of range";
    case ErrorCode::Config: return "config error";
    case ErrorCode::EmptyInput: return "empty input";
    case ErrorCode::InvalidRecord: return "invalid record";
    case ErrorCode::NotFound: return "not found";
    case ErrorCode::Gone: return "gone";
    case ErrorCode::Validation: return "validation error";
    case ErrorCode::ChapterAlignment: return "chapter alignment error";
    case ErrorCode::Internal: return "internal error";
    }
    return "unknown error";
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : ParseError(source, line, 0, source + ":" + std::to_string(line) + ": " + what) {}

ParseError::ParseError(const std::string& /*source*/, std::size_t line, std::size_t offset,
                       const std::string& message)
    : Error(ErrorCode::Parse, message), line_(line), offset_(offset) {}

ParseError ParseError::at_offset(const std::string& source, std::size_t offset,
                                 const std::string& what) {
    return ParseError(source, 0, offset,
                      source + ": byte offset " + std::to_string(offset) + ": " + what);
}

}  // namespace ctcprep
