// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ctcprep/corpus.hpp"

namespace ctcprep {

inline constexpr int kDefaultReviewPort = 8517;

struct TagEntry {
    QualityTag tag = QualityTag::Untagged;
    std::string note;
    std::string updated_at;  ///< ISO-8601 UTC

    bool operator==(const TagEntry&) const = default;
};

/// Quality tags keyed by segment id, persisted as an append-only JSON-lines
/// log next to the manifest. Each set() is fsync'ed before it returns;
/// reloading replays the log with last-write-wins. A torn final line (crash
/// during a write that was never acknowledged) is ignored.
class TagStore {
public:
    explicit TagStore(std::string path);

    TagEntry set(const std::string& id, QualityTag tag, std::string note);
    std::optional<TagEntry> get(const std::string& id) const;
    std::map<std::string, TagEntry> entries() const;
    std::map<std::string, QualityTag> tags() const;
    const std::string& path() const noexcept { return path_; }

    /// Rewrites the log with one line per id.
    void compact();

private:
    std::string path_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, TagEntry> entries_;
};

/// Reads a tag log without opening it for writing.
std::map<std::string, QualityTag> load_tags(const std::string& path);

struct SegmentSummary {
    std::string id;
    std::string text;
    std::string normalized_text;
    double duration = 0.0;
    double word_rate = 0.0;
    double char_rate = 0.0;
    QualityTag tag = QualityTag::Untagged;
    std::string note;
};

struct SegmentPage {
    std::size_t total = 0;  ///< matching segments across all pages
    std::size_t page = 1;
    std::size_t page_size = 0;
    std::vector<SegmentSummary> items;
};

struct ReviewStats {
    std::size_t total = 0;
    std::size_t high = 0;
    std::size_t low = 0;
    std::size_t fixable = 0;
    std::size_t untagged = 0;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

struct ReviewOptions {
    std::string static_dir;  ///< frontend assets; empty serves a placeholder page
    std::size_t peak_buckets = 800;
};

/// Segment listing, audio, waveform peaks and tag persistence for the review
/// frontend. Records are fixed at construction; the tag store is the only
/// mutable state.
class ReviewService {
public:
    /// `base_dir` resolves relative audio paths (normally the manifest's directory).
    ReviewService(std::vector<SegmentRecord> records, std::string base_dir, std::string tag_path,
                  ReviewOptions options = {});
    static std::unique_ptr<ReviewService> open(const std::string& manifest_path, const std::string& tag_path,
                                               ReviewOptions options = {});
    ~ReviewService();

    /// Pages are 1-based; a page past the end is empty. `filter` selects one tag
    /// (Untagged included); nullopt lists everything. Ordered by id.
    SegmentPage list_segments(std::optional<QualityTag> filter, std::size_t page, std::size_t page_size) const;
    std::vector<std::uint8_t> get_audio(const std::string& id) const;
    std::vector<std::pair<float, float>> get_peaks(const std::string& id) const;
    /// `tag` must be High, Low or Fixable.
    TagEntry set_tag(const std::string& id, const std::string& tag, std::string note);
    ReviewStats get_stats() const;

    /// Routes one API request; `target` is the path, `query` its decoded
    /// parameters. Never throws.
    HttpResponse handle(const std::string& method, const std::string& target,
                        const std::multimap<std::string, std::string>& query, const std::string& body);

    /// Blocks serving HTTP until stop() is called. Returns false if the
    /// socket could not be bound.
    bool listen(const std::string& host, int port);
    /// Binds to an ephemeral port and returns it, without serving yet.
    int bind_any_port(const std::string& host);
    /// Serves on a socket bound by bind_any_port.
    bool listen_after_bind();
    void stop();
    bool is_running() const;

    const TagStore& tag_store() const noexcept { return tags_; }
    const std::vector<SegmentRecord>& records() const noexcept { return records_; }

private:
    const SegmentRecord& find(const std::string& id) const;
    std::string audio_path(const SegmentRecord& record) const;
    void setup_routes();

    std::vector<SegmentRecord> records_;  // sorted by id
    std::map<std::string, std::size_t> by_id_;
    std::string base_dir_;
    TagStore tags_;
    ReviewOptions options_;
    mutable std::mutex peaks_mutex_;
    mutable std::map<std::string, std::vector<std::pair<float, float>>> peaks_cache_;

    struct Server;
    std::unique_ptr<Server> server_;
};

}  // namespace ctcprep
