#pragma once

#include <deque>
#include <memory>
#include <string>

#include "treasure/config.hpp"
#include "treasure/fetch.hpp"
#include "treasure/frontier.hpp"
#include "treasure/repository.hpp"
#include "treasure/taxonomy.hpp"
#include "treasure/tgraph.hpp"
#include "treasure/topic.hpp"

namespace treasure {

struct StepReport {
    std::string url;
    FetchKind outcome = FetchKind::net_error;
    bool on_topic = false;
    std::size_t links_enqueued = 0;
    int version = 0;
};

struct CrawlSummary {
    std::size_t pages_crawled = 0;  // fetch attempts
    std::size_t on_topic = 0;       // by the crawler's own classification
    std::string log_path;
};

// The fetch -> response queue -> relevance calculation -> store pipeline over
// a priority frontier. Single-threaded and, in corpus mode, bit-reproducible.
class CrawlerEngine {
public:
    explicit CrawlerEngine(CrawlConfig config);

    // One pipeline pass; false when the budget is exhausted or the frontier
    // is empty.
    bool step(StepReport* report = nullptr);

    // Steps until done, flushes the log, reports totals.
    CrawlSummary run();

    const Repository& repository() const { return repository_; }
    const Frontier& frontier() const { return frontier_; }
    const TGraph* tgraph() const { return tgraph_ ? &*tgraph_ : nullptr; }

private:
    CrawlRecord process_response(const FetchResponse& response);

    CrawlConfig config_;
    Taxonomy taxonomy_;
    TopicProfile profile_;
    std::optional<TGraph> tgraph_;
    std::unique_ptr<Fetcher> fetcher_;
    Frontier frontier_;
    Repository repository_;
    std::deque<FetchResponse> response_queue_;
    DetectorParams detector_;
    OsmParams osm_;
    WatchdogParams watchdog_;
    std::vector<PageExperience> experience_;
    std::size_t attempts_ = 0;
    std::size_t on_topic_ = 0;
    std::size_t steps_since_audit_ = 0;
    std::size_t pages_since_watchdog_ = 0;
};

CrawlSummary run_crawl(const CrawlConfig& config);

}  // namespace treasure
