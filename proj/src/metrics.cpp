#include "treasure/metrics.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "treasure/crawler.hpp"

namespace treasure {

LabelSet LabelSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EvalError("cannot open labels file: " + path);
    LabelSet labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw EvalError(path + ":" + std::to_string(line_no) + ": expected url \\t 0|1");
        std::string url = line.substr(0, tab);
        std::string flag = line.substr(tab + 1);
        if (flag != "0" && flag != "1")
            throw EvalError(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
        labels.labels_[url] = flag == "1";
    }
    return labels;
}

std::optional<bool> LabelSet::label(const std::string& url) const {
    auto it = labels_.find(url);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
}

bool record_on_topic(const CrawlRecord& record, const LabelSet* labels) {
    if (record.outcome.kind != FetchKind::ok) return false;
    if (labels) return labels->label(record.url).value_or(false);
    return record.page_decision.on_topic;
}

MetricsSeries harvest_series(std::span<const CrawlRecord> log, const LabelSet* labels,
                             std::size_t block_size) {
    if (block_size < 1) throw std::invalid_argument("harvest_series: block_size must be >= 1");
    if (log.empty()) throw EvalError("harvest_series: empty crawl log");

    MetricsSeries series;
    series.block_size = block_size;
    std::size_t running = 0;
    for (std::size_t start = 0; start < log.size(); start += block_size) {
        MetricsBlock block;
        block.index = series.blocks.size();
        block.pages = std::min(block_size, log.size() - start);
        for (std::size_t i = start; i < start + block.pages; ++i)
            if (record_on_topic(log[i], labels)) ++block.on_topic;
        block.harvest_ratio =
            static_cast<double>(block.on_topic) / static_cast<double>(block.pages);
        running += block.on_topic;
        series.cumulative.push_back(running);
        series.blocks.push_back(block);
    }
    return series;
}

RecallPrecision recall_precision(std::span<const CrawlRecord> log, const LabelSet& labels) {
    if (labels.empty()) throw EvalError("recall_precision: empty label set");
    std::size_t tp = 0, fp = 0, fn = 0;
    bool overlap = false;
    for (const auto& record : log) {
        if (record.outcome.kind != FetchKind::ok) continue;
        auto truth = labels.label(record.url);
        if (!truth) continue;
        overlap = true;
        bool predicted = record.page_decision.on_topic;
        if (predicted && *truth) ++tp;
        else if (predicted && !*truth) ++fp;
        else if (!predicted && *truth) ++fn;
    }
    if (!overlap) throw EvalError("recall_precision: no labeled overlap");
    RecallPrecision rp;
    if (tp + fn > 0) rp.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (tp + fp > 0) rp.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    return rp;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

void write_metrics_csv(const MetricsSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EvalError("cannot write csv: " + path);
    out << "block_index,pages,on_topic,harvest_ratio,cumulative_on_topic\n";
    for (std::size_t i = 0; i < series.blocks.size(); ++i) {
        const auto& block = series.blocks[i];
        out << block.index << ',' << block.pages << ',' << block.on_topic << ','
            << format_double(block.harvest_ratio) << ',' << series.cumulative[i] << '\n';
    }
    if (!out) throw EvalError("short write to csv: " + path);
}

CompareResult compare_strategies(const CrawlConfig& base, std::span<const Strategy> strategies,
                                 const LabelSet* labels, const std::string& out_csv) {
    if (strategies.empty()) throw EvalError("compare: no strategies given");

    CompareResult result;
    for (Strategy strategy : strategies) {
        CrawlConfig config = base;
        config.strategy = strategy;
        config.output_dir =
            (std::filesystem::path(base.output_dir) / strategy_name(strategy)).string();
        CrawlSummary summary;
        try {
            summary = run_crawl(config);
        } catch (const std::exception& e) {
            throw EvalError("compare: strategy " + strategy_name(strategy) +
                            " failed: " + e.what());
        }
        auto log = load_crawl_log(summary.log_path);
        StrategyOutcome outcome;
        outcome.strategy = strategy;
        outcome.series = harvest_series(log, labels, 1000);
        outcome.total_pages = log.size();
        outcome.total_on_topic = outcome.series.cumulative.back();
        if (labels) {
            try {
                outcome.rp = recall_precision(log, *labels);
            } catch (const EvalError&) {
                outcome.rp = {};  // no overlap: leave undefined
            }
        }
        result.outcomes.push_back(std::move(outcome));
    }

    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw EvalError("cannot write csv: " + out_csv);
    out << "block_index";
    for (const auto& outcome : result.outcomes) {
        std::string name = strategy_name(outcome.strategy);
        out << ",pages_" << name << ",on_topic_" << name << ",harvest_ratio_" << name
            << ",cumulative_on_topic_" << name;
    }
    for (const auto& outcome : result.outcomes)
        out << ",scaled_cumulative_" << strategy_name(outcome.strategy);
    out << '\n';

    std::size_t rows = 0;
    for (const auto& outcome : result.outcomes)
        rows = std::max(rows, outcome.series.blocks.size());
    for (std::size_t row = 0; row < rows; ++row) {
        out << row;
        for (const auto& outcome : result.outcomes) {
            if (row < outcome.series.blocks.size()) {
                const auto& block = outcome.series.blocks[row];
                out << ',' << block.pages << ',' << block.on_topic << ','
                    << format_double(block.harvest_ratio) << ',' << outcome.series.cumulative[row];
            } else {
                out << ",,,,";
            }
        }
        for (const auto& outcome : result.outcomes) {
            out << ',';
            if (row >= outcome.series.blocks.size()) continue;
            // Fig. 12-style column: cumulative count scaled by measured recall.
            if (outcome.rp.recall)
                out << format_double(static_cast<double>(outcome.series.cumulative[row]) *
                                     *outcome.rp.recall);
            else
                out << "undefined";
        }
        out << '\n';
    }
    if (!out) throw EvalError("short write to csv: " + out_csv);
    return result;
}

}  // namespace treasure
