#include "treasure/crawler.hpp"

#include <ctime>
#include <filesystem>

namespace treasure {
namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

}  // namespace

CrawlerEngine::CrawlerEngine(CrawlConfig config)
    : config_((config.validate(), std::move(config))),
      taxonomy_(Taxonomy::load(config_.taxonomy_path)),
      profile_(TopicProfile::load(config_.profile_path,
                                  static_cast<std::size_t>(config_.max_dnumber_length))),
      frontier_(config_.aging_factor, static_cast<std::uint64_t>(config_.aging_interval)),
      repository_(std::filesystem::path(config_.output_dir)) {
    detector_.anchor_impact = config_.anchor_impact;
    detector_.max_dnumber_length = static_cast<std::size_t>(config_.max_dnumber_length);
    osm_.osm_threshold = config_.osm_threshold;
    osm_.unrelated_priority = config_.unrelated_priority;
    watchdog_.enabled = config_.watchdog_enabled;
    watchdog_.interval = static_cast<std::size_t>(config_.watchdog_interval);
    watchdog_.promote_threshold = config_.promote_threshold;
    watchdog_.max_nodes = static_cast<std::size_t>(config_.watchdog_max_nodes);

    if (config_.strategy == Strategy::treasure) tgraph_ = TGraph::load(config_.tgraph_path);

    if (config_.fetch_mode == FetchMode::corpus)
        fetcher_ = std::make_unique<CorpusFetcher>(config_.corpus_manifest);
    else
        fetcher_ = std::make_unique<LiveFetcher>();

    for (const auto& seed : load_seeds(config_.seeds_path)) frontier_.enqueue(seed, 1.0);
}

bool CrawlerEngine::step(StepReport* report) {
    if (attempts_ >= static_cast<std::size_t>(config_.page_budget)) return false;
    auto item = frontier_.dequeue();
    if (!item) return false;

    ++attempts_;
    response_queue_.push_back(fetcher_->fetch(item->url));
    FetchResponse response = std::move(response_queue_.front());
    response_queue_.pop_front();

    CrawlRecord record = process_response(response);
    if (record.page_decision.on_topic) ++on_topic_;

    StepReport local;
    local.url = record.url;
    local.outcome = record.outcome.kind;
    local.on_topic = record.page_decision.on_topic;
    for (const auto& [target, priority] : record.link_scores) {
        if (frontier_.enqueue(target, priority)) ++local.links_enqueued;
    }
    local.version = repository_.store_page(std::move(record), response.body);

    if (config_.checker_interval > 0 &&
        ++steps_since_audit_ >= static_cast<std::size_t>(config_.checker_interval)) {
        repository_.audit();
        steps_since_audit_ = 0;
    }
    if (watchdog_.enabled && tgraph_ &&
        ++pages_since_watchdog_ >= watchdog_.interval) {
        tgraph_->promote_experiences(experience_, watchdog_);
        experience_.clear();
        pages_since_watchdog_ = 0;
    }
    if (report) *report = std::move(local);
    return true;
}

CrawlRecord CrawlerEngine::process_response(const FetchResponse& response) {
    CrawlRecord record;
    record.url = response.url;
    record.outcome.kind = response.kind;
    record.outcome.status = response.status;
    record.outcome.message = response.message;
    record.stored_at =
        config_.fetch_mode == FetchMode::corpus ? 0 : static_cast<std::int64_t>(std::time(nullptr));
    if (response.kind != FetchKind::ok) return record;  // errors carry no links

    PageDocument doc = parse_document(
        response.body, response.url,
        {.context_window = static_cast<std::size_t>(config_.context_window)});
    record.page_decision = classify_page(doc, taxonomy_, profile_, detector_);

    bool page_on_topic = record.page_decision.on_topic;
    if (config_.drop_offtopic_links && !page_on_topic) return record;

    for (const auto& link : doc.links) {
        double priority = config_.unrelated_priority;
        if (config_.strategy == Strategy::bfs) {
            priority = 1.0;
        } else if (page_on_topic) {
            LinkContext ctx =
                extract_context(doc, link, static_cast<std::size_t>(config_.context_window));
            TopicDecision link_decision = classify_link(ctx, taxonomy_, profile_, detector_);
            if (link_decision.on_topic)
                priority = score_link(make_link_signal(ctx, doc), *tgraph_, osm_);
        }
        record.link_scores.emplace_back(link.target, priority);
    }

    if (watchdog_.enabled && page_on_topic)
        experience_.push_back({record.url, doc.title, join_tokens(doc.body_tokens)});
    return record;
}

CrawlSummary CrawlerEngine::run() {
    try {
        while (step()) {
        }
    } catch (...) {
        repository_.flush_log();  // keep the partial log on a clean abort
        throw;
    }
    repository_.flush_log();
    CrawlSummary summary;
    summary.pages_crawled = attempts_;
    summary.on_topic = on_topic_;
    summary.log_path = repository_.log_path().string();
    return summary;
}

CrawlSummary run_crawl(const CrawlConfig& config) { return CrawlerEngine(config).run(); }

}  // namespace treasure
