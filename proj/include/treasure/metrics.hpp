#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "treasure/config.hpp"
#include "treasure/repository.hpp"

namespace treasure {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ground-truth on-topic labels keyed by normalized URL (TSV: url \t 0|1).
class LabelSet {
public:
    static LabelSet load(const std::string& path);

    std::optional<bool> label(const std::string& url) const;
    bool empty() const { return labels_.empty(); }
    std::size_t size() const { return labels_.size(); }

    void set(const std::string& url, bool on_topic) { labels_[url] = on_topic; }

private:
    std::unordered_map<std::string, bool> labels_;
};

struct MetricsBlock {
    std::size_t index = 0;
    std::size_t pages = 0;
    std::size_t on_topic = 0;
    double harvest_ratio = 0.0;
};

struct MetricsSeries {
    std::size_t block_size = 1000;
    std::vector<MetricsBlock> blocks;
    std::vector<std::size_t> cumulative;  // running on-topic totals, one per block
};

// A record counts on-topic when it fetched ok and the label (when labels are
// given) or the crawler's own page decision says so.
bool record_on_topic(const CrawlRecord& record, const LabelSet* labels);

// Per-block counts over the fetch-ordered log; the final partial block keeps
// its true page count.
MetricsSeries harvest_series(std::span<const CrawlRecord> log, const LabelSet* labels,
                             std::size_t block_size);

struct RecallPrecision {
    std::optional<double> recall;     // nullopt = undefined (zero denominator)
    std::optional<double> precision;
};

// Over crawled-ok pages that have labels: recall = TP/(TP+FN),
// precision = TP/(TP+FP), judged classification = the crawler's decision.
RecallPrecision recall_precision(std::span<const CrawlRecord> log, const LabelSet& labels);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

void write_metrics_csv(const MetricsSeries& series, const std::string& path);

struct StrategyOutcome {
    Strategy strategy;
    MetricsSeries series;
    RecallPrecision rp;  // meaningful when labels were supplied
    std::size_t total_on_topic = 0;
    std::size_t total_pages = 0;
};

struct CompareResult {
    std::vector<StrategyOutcome> outcomes;
};

// Runs each strategy on identical corpus/seeds/budget (separate output
// subdirectories), then writes the side-by-side per-block CSV including the
// recall-scaled cumulative columns.
CompareResult compare_strategies(const CrawlConfig& base, std::span<const Strategy> strategies,
                                 const LabelSet* labels, const std::string& out_csv);

}  // namespace treasure
