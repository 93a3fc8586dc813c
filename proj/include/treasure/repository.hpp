#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treasure/fetch.hpp"
#include "treasure/topic.hpp"

namespace treasure {

struct StoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CrawlOutcome {
    FetchKind kind = FetchKind::net_error;
    int status = 0;
    std::string message;
};

struct CrawlRecord {
    std::string url;
    int version = 0;
    std::string html_path;  // relative to the repository root, ok outcomes only
    TopicDecision page_decision;
    std::vector<std::pair<std::string, double>> link_scores;
    CrawlOutcome outcome;
    std::int64_t stored_at = 0;
};

std::string record_to_json(const CrawlRecord& record);
CrawlRecord record_from_json(const std::string& line);

// Versioned page store plus the fetch-ordered crawl log. HTML bodies go to
// pages/ on disk; every store of an already-known URL bumps its version and
// keeps the older ones readable.
class Repository {
public:
    explicit Repository(const std::filesystem::path& root);

    // Assigns the version, persists the html (ok outcomes), appends to the
    // log. Returns the assigned version.
    int store_page(CrawlRecord record, std::string_view html);

    const std::vector<CrawlRecord>& records() const { return records_; }
    std::vector<int> versions_of(const std::string& url) const;
    std::optional<CrawlRecord> version(const std::string& url, int version) const;

    // Version chains must be gapless 1..n with the current pointer at n.
    void audit() const;

    void flush_log() const;
    std::filesystem::path log_path() const { return root_ / "log.jsonl"; }
    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
    std::vector<CrawlRecord> records_;
    std::unordered_map<std::string, std::vector<std::size_t>> history_;  // url -> record indices
};

std::vector<CrawlRecord> load_crawl_log(const std::string& path);

}  // namespace treasure
