#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace treasure {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Strategy { treasure, bfs };
enum class FetchMode { live, corpus };

std::string strategy_name(Strategy s);
Strategy strategy_from(const std::string& name);

struct CrawlConfig {
    int tgraph_depth = 3;
    double osm_threshold = 0.05;
    double anchor_impact = 1.40;
    int max_dnumber_length = 3;
    double unrelated_priority = 0.01;
    double aging_factor = 0.05;
    int aging_interval = 100;
    int page_budget = 1000;
    Strategy strategy = Strategy::treasure;
    FetchMode fetch_mode = FetchMode::corpus;
    int context_window = 50;
    bool watchdog_enabled = false;
    int watchdog_interval = 500;
    double promote_threshold = 0.5;
    int watchdog_max_nodes = 20;
    int checker_interval = 100;

    std::string taxonomy_path;
    std::string profile_path;
    std::string tgraph_path;      // required for the treasure strategy
    std::string corpus_manifest;  // required in corpus mode
    std::string seeds_path;
    std::string output_dir;

    // Not part of the file surface: drops the links of off-topic pages
    // entirely (used to demonstrate what unrelated-priority tunneling buys).
    bool drop_offtopic_links = false;

    // Flat `key = value` file, '#' comments.
    static CrawlConfig load(const std::string& path);

    // Numeric ranges plus presence of the files the chosen modes need.
    void validate() const;
};

// One URL per line, '#' comments.
std::vector<std::string> load_seeds(const std::string& path);

}  // namespace treasure
