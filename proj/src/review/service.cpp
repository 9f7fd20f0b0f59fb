// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "ctcprep/error.hpp"
#include "ctcprep/review.hpp"
#include "httplib.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace ctcprep {

namespace {

constexpr std::size_t kDefaultPageSize = 50;
constexpr std::size_t kMaxPageSize = 1000;

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>ctcprep review</title></head>
<body>
<h1>ctcprep review service</h1>
<p>No frontend assets are installed. Start the service with <code>--static</code> to serve them.</p>
<ul>
<li><code>GET /api/segments?filter=&amp;page=&amp;page_size=</code></li>
<li><code>GET /api/segments/{id}/audio</code></li>
<li><code>GET /api/segments/{id}/peaks</code></li>
<li><code>POST /api/segments/{id}/tag</code> with <code>{"tag": "High|Low|Fixable", "note": ""}</code></li>
<li><code>GET /api/stats</code></li>
</ul>
</body></html>
)";

HttpResponse json_response(int status, const nlohmann::ordered_json& body) {
    return HttpResponse{status, "application/json", body.dump()};
}

HttpResponse error_response(int status, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = message;
    return json_response(status, j);
}

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Gone: return 410;
    case ErrorCode::Validation:
    case ErrorCode::InvalidArgument: return 400;
    default: return 500;
    }
}

std::optional<std::size_t> parse_size(const std::string& s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string query_value(const std::multimap<std::string, std::string>& query, const std::string& key) {
    auto it = query.find(key);
    return it == query.end() ? std::string() : it->second;
}

std::vector<std::string> split_path(const std::string& target) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < target.size()) {
        while (i < target.size() && target[i] == '/') ++i;
        std::size_t j = target.find('/', i);
        if (j == std::string::npos) j = target.size();
        if (j > i) parts.push_back(target.substr(i, j - i));
        i = j;
    }
    return parts;
}

nlohmann::ordered_json summary_json(const SegmentSummary& s) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["text"] = s.text;
    j["normalized_text"] = s.normalized_text;
    j["duration"] = s.duration;
    j["word_rate"] = s.word_rate;
    j["char_rate"] = s.char_rate;
    j["tag"] = std::string(to_string(s.tag));
    j["note"] = s.note;
    return j;
}

}  // namespace

struct ReviewService::Server {
    httplib::Server http;
};

ReviewService::ReviewService(std::vector<SegmentRecord> records, std::string base_dir, std::string tag_path,
                             ReviewOptions options)
    : records_(std::move(records)), base_dir_(std::move(base_dir)), tags_(std::move(tag_path)),
      options_(std::move(options)), server_(std::make_unique<Server>()) {
    std::sort(records_.begin(), records_.end(),
              [](const SegmentRecord& a, const SegmentRecord& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (!by_id_.emplace(records_[i].id, i).second) {
            throw Error(ErrorCode::Validation, "duplicate segment id '" + records_[i].id + "' in manifest");
        }
    }
    setup_routes();
}

ReviewService::~ReviewService() { stop(); }

std::unique_ptr<ReviewService> ReviewService::open(const std::string& manifest_path, const std::string& tag_path,
                                                   ReviewOptions options) {
    auto records = load_manifest(manifest_path);
    const std::string base = fs::path(manifest_path).parent_path().string();
    return std::make_unique<ReviewService>(std::move(records), base, tag_path, std::move(options));
}

const SegmentRecord& ReviewService::find(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw Error(ErrorCode::NotFound, "unknown segment id '" + id + "'");
    return records_[it->second];
}

std::string ReviewService::audio_path(const SegmentRecord& record) const {
    fs::path p(record.audio_filepath);
    if (p.is_relative() && !base_dir_.empty()) p = fs::path(base_dir_) / p;
    return p.string();
}

SegmentPage ReviewService::list_segments(std::optional<QualityTag> filter, std::size_t page,
                                         std::size_t page_size) const {
    if (page < 1) throw Error(ErrorCode::Validation, "page numbers start at 1");
    if (page_size < 1 || page_size > kMaxPageSize) {
        throw Error(ErrorCode::Validation, "page_size must lie in [1, " + std::to_string(kMaxPageSize) + "]");
    }
    const auto tags = tags_.entries();
    SegmentPage out;
    out.page = page;
    out.page_size = page_size;
    const std::size_t first = (page - 1) * page_size;
    for (const auto& r : records_) {
        auto t = tags.find(r.id);
        const QualityTag tag = t == tags.end() ? QualityTag::Untagged : t->second.tag;
        if (filter && tag != *filter) continue;
        if (out.total >= first && out.items.size() < page_size) {
            out.items.push_back({r.id, r.text, r.normalized_text, r.duration, r.word_rate, r.char_rate, tag,
                                 t == tags.end() ? std::string() : t->second.note});
        }
        ++out.total;
    }
    return out;
}

std::vector<std::uint8_t> ReviewService::get_audio(const std::string& id) const {
    const std::string path = audio_path(find(id));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Gone, "audio for '" + id + "' is missing at " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::pair<float, float>> ReviewService::get_peaks(const std::string& id) const {
    const SegmentRecord& r = find(id);
    {
        std::lock_guard lock(peaks_mutex_);
        if (auto it = peaks_cache_.find(id); it != peaks_cache_.end()) return it->second;
    }
    const std::string path = audio_path(r);
    if (!fs::exists(path)) throw Error(ErrorCode::Gone, "audio for '" + id + "' is missing at " + path);
    auto peaks = waveform_peaks(load_wav(path), options_.peak_buckets);
    std::lock_guard lock(peaks_mutex_);
    return peaks_cache_.emplace(id, std::move(peaks)).first->second;
}

TagEntry ReviewService::set_tag(const std::string& id, const std::string& tag, std::string note) {
    find(id);
    auto parsed = parse_quality_tag(tag);
    if (!parsed || *parsed == QualityTag::Untagged) {
        throw Error(ErrorCode::Validation, "invalid tag '" + tag + "'; allowed values: High, Low, Fixable");
    }
    return tags_.set(id, *parsed, std::move(note));
}

ReviewStats ReviewService::get_stats() const {
    const auto tags = tags_.entries();
    ReviewStats s;
    s.total = records_.size();
    for (const auto& r : records_) {
        auto t = tags.find(r.id);
        switch (t == tags.end() ? QualityTag::Untagged : t->second.tag) {
        case QualityTag::High: ++s.high; break;
        case QualityTag::Low: ++s.low; break;
        case QualityTag::Fixable: ++s.fixable; break;
        case QualityTag::Untagged: ++s.untagged; break;
        }
    }
    return s;
}

HttpResponse ReviewService::handle(const std::string& method, const std::string& target,
                                   const std::multimap<std::string, std::string>& query, const std::string& body) {
    try {
        const auto parts = split_path(target);
        if (parts.size() < 2 || parts[0] != "api") return error_response(404, "no such endpoint");

        if (parts.size() == 2 && parts[1] == "stats") {
            if (method != "GET") return error_response(405, "method not allowed");
            const ReviewStats s = get_stats();
            nlohmann::ordered_json j;
            j["total"] = s.total;
            j["High"] = s.high;
            j["Low"] = s.low;
            j["Fixable"] = s.fixable;
            j["Untagged"] = s.untagged;
            j["reviewed"] = s.total - s.untagged;
            return json_response(200, j);
        }

        if (parts[1] != "segments") return error_response(404, "no such endpoint");

        if (parts.size() == 2) {
            if (method != "GET") return error_response(405, "method not allowed");
            std::optional<QualityTag> filter;
            if (const std::string f = query_value(query, "filter"); !f.empty()) {
                filter = parse_quality_tag(f);
                if (!filter) return error_response(400, "invalid filter '" + f + "'; allowed: High, Low, Fixable, Untagged");
            }
            std::size_t page = 1, page_size = kDefaultPageSize;
            if (const std::string p = query_value(query, "page"); !p.empty()) {
                auto v = parse_size(p);
                if (!v) return error_response(400, "page must be a positive integer");
                page = *v;
            }
            if (const std::string p = query_value(query, "page_size"); !p.empty()) {
                auto v = parse_size(p);
                if (!v) return error_response(400, "page_size must be a positive integer");
                page_size = *v;
            }
            const SegmentPage result = list_segments(filter, page, page_size);
            nlohmann::ordered_json j;
            j["total"] = result.total;
            j["page"] = result.page;
            j["page_size"] = result.page_size;
            j["items"] = nlohmann::ordered_json::array();
            for (const auto& item : result.items) j["items"].push_back(summary_json(item));
            return json_response(200, j);
        }

        if (parts.size() != 4) return error_response(404, "no such endpoint");
        const std::string& id = parts[2];
        const std::string& action = parts[3];
        if (action == "audio") {
            if (method != "GET") return error_response(405, "method not allowed");
            auto bytes = get_audio(id);
            return HttpResponse{200, "audio/wav", std::string(bytes.begin(), bytes.end())};
        }
        if (action == "peaks") {
            if (method != "GET") return error_response(405, "method not allowed");
            const auto peaks = get_peaks(id);
            nlohmann::ordered_json j;
            j["id"] = id;
            j["buckets"] = peaks.size();
            j["peaks"] = nlohmann::ordered_json::array();
            for (const auto& [mn, mx] : peaks) j["peaks"].push_back({mn, mx});
            return json_response(200, j);
        }
        if (action == "tag") {
            if (method != "POST") return error_response(405, "method not allowed");
            nlohmann::json req;
            try {
                req = nlohmann::json::parse(body);
            } catch (const nlohmann::json::exception&) {
                return error_response(400, "body must be a JSON object with 'tag' and optional 'note'");
            }
            if (!req.is_object() || !req.contains("tag") || !req["tag"].is_string()) {
                return error_response(400, "body must be a JSON object with 'tag' and optional 'note'");
            }
            const std::string note = req.contains("note") && req["note"].is_string() ? req["note"].get<std::string>() : "";
            try {
                const TagEntry e = set_tag(id, req["tag"].get<std::string>(), note);
                nlohmann::ordered_json j;
                j["id"] = id;
                j["tag"] = std::string(to_string(e.tag));
                j["note"] = e.note;
                j["updated_at"] = e.updated_at;
                return json_response(200, j);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Validation) throw;
                nlohmann::ordered_json j;
                j["error"] = e.what();
                j["allowed"] = {"High", "Low", "Fixable"};
                return json_response(400, j);
            }
        }
        return error_response(404, "no such endpoint");
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

void ReviewService::setup_routes() {
    auto& http = server_->http;
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
        HttpResponse out = handle(req.method, req.path, query, req.body);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    http.Get(R"(/api/.*)", forward);
    http.Post(R"(/api/.*)", forward);
    if (!options_.static_dir.empty() && fs::is_directory(options_.static_dir)) {
        http.set_mount_point("/", options_.static_dir);
    } else {
        http.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
        });
    }
}

bool ReviewService::listen(const std::string& host, int port) { return server_->http.listen(host, port); }

int ReviewService::bind_any_port(const std::string& host) { return server_->http.bind_to_any_port(host); }

bool ReviewService::listen_after_bind() { return server_->http.listen_after_bind(); }

void ReviewService::stop() {
    if (server_) server_->http.stop();
}

bool ReviewService::is_running() const { return server_->http.is_running(); }

}  // namespace ctcprep
