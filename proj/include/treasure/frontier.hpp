#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace treasure {

struct FrontierItem {
    std::string url;
    double priority = 0.0;  // in (0, 1]
    std::uint64_t seq = 0;  // insertion counter, FIFO tie-break
};

// Seen-set-guarded max-priority queue with cyclic aging: every
// aging_interval-th accepted insertion bumps every queued priority by
// aging_factor, unless the bump would reach 1.
class Frontier {
public:
    Frontier() = default;
    Frontier(double aging_factor, std::uint64_t aging_interval)
        : aging_factor_(aging_factor), aging_interval_(aging_interval) {}

    // False when the URL was ever enqueued before. Throws
    // std::invalid_argument unless priority is in (0, 1].
    bool enqueue(const std::string& url, double priority);

    // Highest priority first; equal priorities dequeue in insertion order.
    std::optional<FrontierItem> dequeue();

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    std::uint64_t insert_count() const { return insert_count_; }
    bool seen(const std::string& url) const { return seen_.count(url) > 0; }

private:
    void apply_aging();

    std::vector<FrontierItem> heap_;
    std::unordered_set<std::string> seen_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t insert_count_ = 0;
    double aging_factor_ = 0.05;
    std::uint64_t aging_interval_ = 100;
};

}  // namespace treasure
