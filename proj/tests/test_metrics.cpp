#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <sstream>

#include "support/temp_dir.hpp"
#include "treasure/metrics.hpp"

using namespace treasure;

namespace {

CrawlRecord make_record(const std::string& url, bool ok, bool on_topic) {
    CrawlRecord record;
    record.url = url;
    record.outcome = ok ? CrawlOutcome{FetchKind::ok, 200, ""}
                        : CrawlOutcome{FetchKind::http_error, 503, "down"};
    record.page_decision.on_topic = on_topic;
    return record;
}

std::vector<CrawlRecord> records_with(std::size_t pages, std::size_t on_topic) {
    std::vector<CrawlRecord> log;
    for (std::size_t i = 0; i < pages; ++i)
        log.push_back(make_record("http://m.test/" + std::to_string(i), true, i < on_topic));
    return log;
}

}  // namespace

TEST_CASE("harvest ratio per block") {
    auto log = records_with(10, 2);
    auto series = harvest_series(log, nullptr, 10);
    REQUIRE(series.blocks.size() == 1);
    CHECK(series.blocks[0].pages == 10);
    CHECK(series.blocks[0].on_topic == 2);
    CHECK(series.blocks[0].harvest_ratio == doctest::Approx(0.20).epsilon(1e-12));
    CHECK(series.cumulative == std::vector<std::size_t>{2});
}

TEST_CASE("partial final block keeps its true page count") {
    auto log = records_with(15, 15);
    auto series = harvest_series(log, nullptr, 10);
    REQUIRE(series.blocks.size() == 2);
    CHECK(series.blocks[0].pages == 10);
    CHECK(series.blocks[1].pages == 5);
    CHECK(series.blocks[1].index == 1);
    CHECK(series.cumulative == std::vector<std::size_t>{10, 15});

    // block page counts sum to the log length
    std::size_t total = 0;
    for (const auto& block : series.blocks) total += block.pages;
    CHECK(total == log.size());
}

TEST_CASE("zero on-topic everywhere") {
    auto log = records_with(7, 0);
    auto series = harvest_series(log, nullptr, 3);
    for (const auto& block : series.blocks) {
        CHECK(block.on_topic == 0);
        CHECK(block.harvest_ratio == 0.0);
    }
    for (auto c : series.cumulative) CHECK(c == 0);
}

TEST_CASE("labels override the crawler's own decision") {
    auto log = records_with(4, 4);  // crawler says all on-topic
    LabelSet labels;
    labels.set("http://m.test/0", true);
    labels.set("http://m.test/1", false);
    // 2 and 3 unlabeled: count off-topic under labels
    auto series = harvest_series(log, &labels, 4);
    CHECK(series.blocks[0].on_topic == 1);
}

TEST_CASE("failed fetches never count on-topic") {
    std::vector<CrawlRecord> log = {make_record("http://m.test/ok", true, true),
                                    make_record("http://m.test/err", false, true)};
    auto series = harvest_series(log, nullptr, 10);
    CHECK(series.blocks[0].pages == 2);
    CHECK(series.blocks[0].on_topic == 1);
}

TEST_CASE("harvest series contract errors") {
    auto log = records_with(3, 1);
    CHECK_THROWS_AS(harvest_series(log, nullptr, 0), std::invalid_argument);
    CHECK_THROWS_AS(harvest_series(std::vector<CrawlRecord>{}, nullptr, 10), EvalError);
}

TEST_CASE("recall and precision on the 5/5/5 fixture") {
    std::vector<CrawlRecord> log;
    LabelSet labels;
    int n = 0;
    auto add = [&](bool truth, bool predicted) {
        std::string url = "http://m.test/" + std::to_string(n++);
        log.push_back(make_record(url, true, predicted));
        labels.set(url, truth);
    };
    for (int i = 0; i < 5; ++i) add(true, true);    // TP
    for (int i = 0; i < 5; ++i) add(false, true);   // FP
    for (int i = 0; i < 5; ++i) add(true, false);   // FN

    auto rp = recall_precision(log, labels);
    REQUIRE(rp.recall.has_value());
    REQUIRE(rp.precision.has_value());
    CHECK(*rp.recall == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(*rp.precision == doctest::Approx(0.5).epsilon(1e-12));

    // permutation invariance
    std::mt19937 rng(5);
    std::shuffle(log.begin(), log.end(), rng);
    auto rp2 = recall_precision(log, labels);
    CHECK(*rp2.recall == *rp.recall);
    CHECK(*rp2.precision == *rp.precision);
}

TEST_CASE("perfect crawl scores 1.0 on both metrics") {
    std::vector<CrawlRecord> log;
    LabelSet labels;
    for (int i = 0; i < 4; ++i) {
        std::string url = "http://m.test/" + std::to_string(i);
        log.push_back(make_record(url, true, true));
        labels.set(url, true);
    }
    auto rp = recall_precision(log, labels);
    CHECK(*rp.recall == 1.0);
    CHECK(*rp.precision == 1.0);
}

TEST_CASE("zero denominators are undefined, not zero") {
    std::vector<CrawlRecord> log;
    LabelSet labels;
    for (int i = 0; i < 3; ++i) {  // labeled true, classified off-topic: FN only
        std::string url = "http://m.test/" + std::to_string(i);
        log.push_back(make_record(url, true, false));
        labels.set(url, true);
    }
    auto rp = recall_precision(log, labels);
    CHECK_FALSE(rp.precision.has_value());
    REQUIRE(rp.recall.has_value());
    CHECK(*rp.recall == 0.0);
}

TEST_CASE("no labeled overlap is an error") {
    auto log = records_with(3, 1);
    LabelSet labels;
    labels.set("http://elsewhere.test/", true);
    CHECK_THROWS_WITH_AS(recall_precision(log, labels), doctest::Contains("no labeled overlap"),
                         EvalError);
    CHECK_THROWS_AS(recall_precision(log, LabelSet{}), EvalError);
}

TEST_CASE("label files parse and reject junk") {
    testsupport::TempDir dir("labels");
    auto path = dir.write("l.tsv", "# c\nhttp://a.test/\t1\nhttp://b.test/\t0\n");
    LabelSet labels = LabelSet::load(path);
    CHECK(labels.label("http://a.test/") == true);
    CHECK(labels.label("http://b.test/") == false);
    CHECK_FALSE(labels.label("http://c.test/").has_value());
    CHECK(labels.size() == 2);

    CHECK_THROWS_AS(LabelSet::load(dir.write("bad.tsv", "http://a.test/ 1\n")), EvalError);
    CHECK_THROWS_AS(LabelSet::load(dir.write("bad2.tsv", "http://a.test/\t2\n")), EvalError);
}

TEST_CASE("format_double round trips exactly") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        double numerator = static_cast<double>(rng() % 100000);
        double denominator = static_cast<double>(1 + rng() % 100000);
        double value = numerator / denominator;
        std::string text = format_double(value);
        CHECK(std::strtod(text.c_str(), nullptr) == value);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("metrics csv round trips the computed numbers") {
    auto log = records_with(17, 6);
    auto series = harvest_series(log, nullptr, 5);
    testsupport::TempDir dir("csv");
    auto path = (dir.path() / "m.csv").string();
    write_metrics_csv(series, path);

    std::istringstream in(testsupport::read_file(path));
    std::string header;
    std::getline(in, header);
    CHECK(header == "block_index,pages,on_topic,harvest_ratio,cumulative_on_topic");
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 5);
        CHECK(std::stoul(cells[0]) == series.blocks[row].index);
        CHECK(std::stoul(cells[1]) == series.blocks[row].pages);
        CHECK(std::stoul(cells[2]) == series.blocks[row].on_topic);
        CHECK(std::strtod(cells[3].c_str(), nullptr) == series.blocks[row].harvest_ratio);
        CHECK(std::stoul(cells[4]) == series.cumulative[row]);
        ++row;
    }
    CHECK(row == series.blocks.size());
}
