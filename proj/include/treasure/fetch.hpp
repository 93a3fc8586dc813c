#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>

namespace treasure {

enum class FetchKind { ok, http_error, net_error };

struct FetchResponse {
    std::string url;
    FetchKind kind = FetchKind::net_error;
    int status = 0;        // meaningful for ok / http_error
    std::string message;   // error detail
    std::string body;      // html bytes, ok only
    std::int64_t fetched_at = 0;
};

class Fetcher {
public:
    virtual ~Fetcher() = default;
    // Failures come back as response variants, never as exceptions.
    virtual FetchResponse fetch(const std::string& url) = 0;
};

// Serves pages from a JSON-lines manifest: {"url": ..., "path": ..., "status": ...}
// with paths relative to the manifest. Unknown URLs yield 404. Timestamps are
// zeroed so corpus runs stay bit-reproducible.
class CorpusFetcher final : public Fetcher {
public:
    explicit CorpusFetcher(const std::string& manifest_path);
    FetchResponse fetch(const std::string& url) override;
    std::size_t page_count() const { return entries_.size(); }

private:
    struct Entry {
        std::string path;
        int status = 200;
    };
    std::unordered_map<std::string, Entry> entries_;
    std::filesystem::path base_;
};

// HTTP(S) GET with a timeout, one retry on network errors, robots.txt
// disallow handling and a fixed per-host delay.
class LiveFetcher final : public Fetcher {
public:
    explicit LiveFetcher(int timeout_seconds = 10, int per_host_delay_ms = 500);
    ~LiveFetcher() override;
    FetchResponse fetch(const std::string& url) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace treasure
