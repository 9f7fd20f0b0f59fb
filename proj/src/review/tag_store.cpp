// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <filesystem>

#include "ctcprep/error.hpp"
#include "ctcprep/review.hpp"
#include "json.hpp"
#include "util/text_io.hpp"

namespace ctcprep {

namespace {

std::string utc_timestamp() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t secs = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

std::string entry_line(const std::string& id, const TagEntry& e) {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["tag"] = std::string(to_string(e.tag));
    j["note"] = e.note;
    j["updated_at"] = e.updated_at;
    return j.dump() + "\n";
}

void append_durable(const std::string& path, const std::string& line) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) throw Error(ErrorCode::Io, "cannot open tag file '" + path + "': " + std::strerror(errno));
    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::close(fd);
            throw Error(ErrorCode::Io, "cannot write tag file '" + path + "': " + std::strerror(err));
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        const int err = errno;
        ::close(fd);
        throw Error(ErrorCode::Io, "cannot sync tag file '" + path + "': " + std::strerror(err));
    }
    ::close(fd);
}

std::map<std::string, TagEntry> replay(const std::string& path) {
    std::map<std::string, TagEntry> entries;
    if (!std::filesystem::exists(path)) return entries;
    const std::string text = util::read_file(path);
    const auto lines = util::split_lines(text);
    const bool torn_tail = !text.empty() && text.back() != '\n';
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (util::trim(lines[i]).empty()) continue;
        const bool last = i + 1 == lines.size();
        try {
            const auto j = nlohmann::json::parse(lines[i]);
            auto tag = parse_quality_tag(j.at("tag").get<std::string>());
            if (!tag || *tag == QualityTag::Untagged) throw ParseError(path, i + 1, "invalid tag value");
            entries[j.at("id").get<std::string>()] =
                TagEntry{*tag, j.value("note", std::string()), j.value("updated_at", std::string())};
        } catch (const nlohmann::json::exception& e) {
            if (last && torn_tail) break;
            throw ParseError(path, i + 1, std::string("malformed tag entry: ") + e.what());
        }
    }
    return entries;
}

}  // namespace

TagStore::TagStore(std::string path) : path_(std::move(path)), entries_(replay(path_)) {}

TagEntry TagStore::set(const std::string& id, QualityTag tag, std::string note) {
    if (tag == QualityTag::Untagged) throw Error(ErrorCode::Validation, "cannot store the Untagged state");
    TagEntry entry{tag, std::move(note), utc_timestamp()};
    std::unique_lock lock(mutex_);
    append_durable(path_, entry_line(id, entry));
    entries_[id] = entry;
    return entry;
}

std::optional<TagEntry> TagStore::get(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::map<std::string, TagEntry> TagStore::entries() const {
    std::shared_lock lock(mutex_);
    return entries_;
}

std::map<std::string, QualityTag> TagStore::tags() const {
    std::shared_lock lock(mutex_);
    std::map<std::string, QualityTag> out;
    for (const auto& [id, e] : entries_) out.emplace(id, e.tag);
    return out;
}

void TagStore::compact() {
    std::unique_lock lock(mutex_);
    std::string text;
    for (const auto& [id, e] : entries_) text += entry_line(id, e);
    util::write_file(path_, text);
}

std::map<std::string, QualityTag> load_tags(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::Io, "tag file '" + path + "' does not exist");
    std::map<std::string, QualityTag> out;
    for (const auto& [id, e] : replay(path)) out.emplace(id, e.tag);
    return out;
}

}  // namespace ctcprep
