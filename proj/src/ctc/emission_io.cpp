// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ctcprep/ctc.hpp"
#include "ctcprep/error.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

namespace {

double parse_real(std::string_view field, const std::string& source, std::size_t line) {
    if (field == "-inf" || field == "-Infinity") return kNegInf;
    double v = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ParseError(source, line, "'" + std::string(field) + "' is not a decimal number");
    }
    return v;
}

template <typename Int>
Int parse_count(std::string_view field, const std::string& source, std::size_t line, const char* what) {
    Int v{};
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(source, line, std::string(what) + " '" + std::string(field) + "' is not an integer");
    }
    return v;
}

}  // namespace

LogProbMatrix parse_emissions(std::string_view text, const std::string& source) {
    const auto lines = util::split_lines(text);
    if (lines.size() < 2) throw ParseError(source, lines.size() + 1, "missing header or vocabulary line");

    const auto header = util::split_fields(lines[0]);
    if (header.size() != 3) throw ParseError(source, 1, "header must be 'T V frame_duration_sec'");
    const auto T = parse_count<std::size_t>(header[0], source, 1, "frame count");
    const auto V = parse_count<std::size_t>(header[1], source, 1, "vocabulary size");
    const double frame_duration = parse_real(header[2], source, 1);
    if (T < 1) throw ParseError(source, 1, "frame count must be at least 1");
    if (V < 2) throw ParseError(source, 1, "vocabulary size must be at least 2");
    if (!(frame_duration > 0.0)) throw ParseError(source, 1, "frame duration must be positive");

    auto vocab_fields = util::split_fields(lines[1]);
    if (vocab_fields.size() != V) {
        throw ParseError(source, 2, "expected " + std::to_string(V) + " vocabulary tokens, found " +
                                        std::to_string(vocab_fields.size()));
    }
    std::vector<std::string> vocabulary(vocab_fields.begin(), vocab_fields.end());
    Token blank = -1;
    for (std::size_t k = 0; k < V; ++k) {
        if (vocabulary[k] == "<pad>") {
            blank = static_cast<Token>(k);
            break;
        }
    }
    if (blank < 0) throw ParseError(source, 2, "vocabulary has no '<pad>' blank token");

    if (lines.size() < T + 2) {
        throw ParseError(source, lines.size() + 1, "expected " + std::to_string(T) + " emission rows, found " +
                                                       std::to_string(lines.size() - 2));
    }
    for (std::size_t i = T + 2; i < lines.size(); ++i) {
        if (!util::trim(lines[i]).empty()) throw ParseError(source, i + 1, "unexpected data after the last row");
    }

    Matrix values(T, V);
    std::vector<double> row(V);
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t line_no = t + 3;
        const auto fields = util::split_fields(lines[t + 2]);
        if (fields.size() != V) {
            throw ParseError(source, line_no, "expected " + std::to_string(V) + " values, found " +
                                                  std::to_string(fields.size()));
        }
        for (std::size_t k = 0; k < V; ++k) {
            row[k] = parse_real(fields[k], source, line_no);
            if (row[k] > kRowNormTolerance) throw ParseError(source, line_no, "value is not a log-probability");
            values(t, k) = row[k];
        }
        const double z = logsumexp(row);
        if (!(std::abs(z) <= kRowNormTolerance)) {
            std::ostringstream msg;
            msg << "row is not a normalized distribution (logsumexp = " << z << ")";
            throw ParseError(source, line_no, msg.str());
        }
    }
    return LogProbMatrix(std::move(values), frame_duration, blank, std::move(vocabulary));
}

LogProbMatrix load_emissions(const std::string& path) {
    return parse_emissions(util::read_file(path), path);
}

std::string format_emissions(const LogProbMatrix& emissions) {
    std::ostringstream out;
    out << emissions.num_frames() << ' ' << emissions.vocab_size() << ' '
        << util::format_decimal(emissions.frame_duration()) << '\n';
    for (std::size_t k = 0; k < emissions.vocab_size(); ++k) {
        if (k) out << ' ';
        if (!emissions.vocabulary().empty()) {
            out << emissions.vocabulary()[k];
        } else if (static_cast<Token>(k) == emissions.blank()) {
            out << "<pad>";
        } else {
            out << "t" << k;
        }
    }
    out << '\n';
    for (std::size_t t = 0; t < emissions.num_frames(); ++t) {
        auto r = emissions.row(t);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) out << ' ';
            if (r[k] == kNegInf) {
                out << "-inf";
            } else {
                out << util::format_decimal(r[k]);
            }
        }
        out << '\n';
    }
    return out.str();
}

void save_emissions(const LogProbMatrix& emissions, const std::string& path) {
    util::write_file(path, format_emissions(emissions));
}

}  // namespace ctcprep
