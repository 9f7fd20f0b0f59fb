// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ctcprep/error.hpp"
#include "ctcprep/eval.hpp"
#include "json.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

std::string format_rate(double rate) {
    if (std::isinf(rate)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", rate);
    return buf;
}

std::map<std::string, std::string> parse_hypotheses(std::string_view text, const std::string& source) {
    std::map<std::string, std::string> out;
    const auto lines = util::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (util::trim(lines[i]).empty()) continue;
        const auto tab = lines[i].find('\t');
        std::string id(util::trim(lines[i].substr(0, tab)));
        std::string hyp = tab == std::string_view::npos ? std::string() : std::string(lines[i].substr(tab + 1));
        if (id.empty()) throw ParseError(source, i + 1, "empty hypothesis id");
        if (!out.emplace(id, std::move(hyp)).second) {
            throw Error(ErrorCode::InvalidArgument, source + ":" + std::to_string(i + 1) + ": duplicate hypothesis id '" + id + "'");
        }
    }
    return out;
}

std::map<std::string, std::string> load_hypotheses(const std::string& path) {
    return parse_hypotheses(util::read_file(path), path);
}

EvalReport eval_report(std::span<const SegmentRecord> manifest, const std::map<std::string, std::string>& hypotheses,
                       const NormalizeOptions& normalize) {
    EvalReport report;
    for (const auto& r : manifest) {
        SegmentScore s;
        s.id = r.id;
        s.reference = normalize_line(r.normalized_text.empty() ? r.text : r.normalized_text, normalize);
        auto it = hypotheses.find(r.id);
        if (it == hypotheses.end()) {
            s.missing_hypothesis = true;
            ++report.missing_hypotheses;
        } else {
            s.hypothesis = normalize_line(it->second, normalize);
        }
        s.words = word_errors(s.reference, s.hypothesis);
        s.chars = char_errors(s.reference, s.hypothesis);
        if (s.words.undefined_reference()) ++report.undefined_references;
        report.words += s.words;
        report.chars += s.chars;
        report.segments.push_back(std::move(s));
    }
    return report;
}

std::string format_report_table(const EvalReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %6s %4s %4s %4s %10s %6s %10s\n", "id", "words", "S", "D", "I", "WER",
                  "chars", "CER");
    out << line;
    for (const auto& s : report.segments) {
        std::snprintf(line, sizeof line, "%-24s %6zu %4zu %4zu %4zu %10s %6zu %10s%s\n", s.id.c_str(),
                      s.words.reference_length, s.words.substitutions, s.words.deletions, s.words.insertions,
                      format_rate(s.words.rate()).c_str(), s.chars.reference_length, format_rate(s.chars.rate()).c_str(),
                      s.missing_hypothesis ? "  (missing hypothesis)" : "");
        out << line;
    }
    out << "segments: " << report.segments.size() << "  missing hypotheses: " << report.missing_hypotheses
        << "  undefined references: " << report.undefined_references << '\n';
    out << "WER: " << format_rate(report.corpus_wer()) << "  (S=" << report.words.substitutions
        << " D=" << report.words.deletions << " I=" << report.words.insertions << " N=" << report.words.reference_length
        << ")\n";
    out << "CER: " << format_rate(report.corpus_cer()) << "  (S=" << report.chars.substitutions
        << " D=" << report.chars.deletions << " I=" << report.chars.insertions << " N=" << report.chars.reference_length
        << ")\n";
    return out.str();
}

namespace {

nlohmann::ordered_json breakdown_json(const ErrorBreakdown& b) {
    nlohmann::ordered_json j;
    j["substitutions"] = b.substitutions;
    j["deletions"] = b.deletions;
    j["insertions"] = b.insertions;
    j["reference_length"] = b.reference_length;
    if (b.undefined_reference()) {
        j["rate"] = nullptr;
        j["undefined_reference"] = true;
    } else {
        j["rate"] = b.rate();
    }
    return j;
}

}  // namespace

std::string format_report_jsonl(const EvalReport& report) {
    std::string out;
    for (const auto& s : report.segments) {
        nlohmann::ordered_json j;
        j["type"] = "segment";
        j["id"] = s.id;
        j["reference"] = s.reference;
        j["hypothesis"] = s.hypothesis;
        j["missing_hypothesis"] = s.missing_hypothesis;
        j["wer"] = breakdown_json(s.words);
        j["cer"] = breakdown_json(s.chars);
        out += j.dump();
        out += '\n';
    }
    nlohmann::ordered_json total;
    total["type"] = "corpus";
    total["segments"] = report.segments.size();
    total["missing_hypotheses"] = report.missing_hypotheses;
    total["undefined_references"] = report.undefined_references;
    total["wer"] = breakdown_json(report.words);
    total["cer"] = breakdown_json(report.chars);
    total["wer_text"] = format_rate(report.corpus_wer());
    total["cer_text"] = format_rate(report.corpus_cer());
    out += total.dump();
    out += '\n';
    return out;
}

}  // namespace ctcprep
