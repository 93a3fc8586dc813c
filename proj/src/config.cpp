#include "treasure/config.hpp"

#include <filesystem>
#include <fstream>

namespace treasure {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

int to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        int out = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (...) {
        throw ConfigError("config: bad integer for '" + key + "': " + value);
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (...) {
        throw ConfigError("config: bad number for '" + key + "': " + value);
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "off" || value == "no") return false;
    throw ConfigError("config: bad boolean for '" + key + "': " + value);
}

void require_file(const std::string& what, const std::string& path) {
    if (path.empty()) throw ConfigError("config: missing required path '" + what + "'");
    if (!std::filesystem::exists(path))
        throw ConfigError("config: " + what + " does not exist: " + path);
}

}  // namespace

std::string strategy_name(Strategy s) { return s == Strategy::treasure ? "treasure" : "bfs"; }

Strategy strategy_from(const std::string& name) {
    if (name == "treasure") return Strategy::treasure;
    if (name == "bfs") return Strategy::bfs;
    throw ConfigError("unknown strategy: " + name);
}

CrawlConfig CrawlConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    CrawlConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));

        if (key == "tgraph_depth") config.tgraph_depth = to_int(key, value);
        else if (key == "osm_threshold") config.osm_threshold = to_double(key, value);
        else if (key == "anchor_impact") config.anchor_impact = to_double(key, value);
        else if (key == "max_dnumber_length") config.max_dnumber_length = to_int(key, value);
        else if (key == "unrelated_priority") config.unrelated_priority = to_double(key, value);
        else if (key == "aging_factor") config.aging_factor = to_double(key, value);
        else if (key == "aging_interval") config.aging_interval = to_int(key, value);
        else if (key == "page_budget") config.page_budget = to_int(key, value);
        else if (key == "strategy") config.strategy = strategy_from(value);
        else if (key == "fetch_mode") {
            if (value == "live") config.fetch_mode = FetchMode::live;
            else if (value == "corpus") config.fetch_mode = FetchMode::corpus;
            else throw ConfigError("config: unknown fetch_mode: " + value);
        }
        else if (key == "context_window") config.context_window = to_int(key, value);
        else if (key == "watchdog_enabled") config.watchdog_enabled = to_bool(key, value);
        else if (key == "watchdog_interval") config.watchdog_interval = to_int(key, value);
        else if (key == "promote_threshold") config.promote_threshold = to_double(key, value);
        else if (key == "watchdog_max_nodes") config.watchdog_max_nodes = to_int(key, value);
        else if (key == "checker_interval") config.checker_interval = to_int(key, value);
        else if (key == "taxonomy_path") config.taxonomy_path = value;
        else if (key == "profile_path") config.profile_path = value;
        else if (key == "tgraph_path") config.tgraph_path = value;
        else if (key == "corpus_manifest") config.corpus_manifest = value;
        else if (key == "seeds_path") config.seeds_path = value;
        else if (key == "output_dir") config.output_dir = value;
        else
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return config;
}

void CrawlConfig::validate() const {
    auto positive = [](const char* name, double v) {
        if (!(v > 0))
            throw ConfigError(std::string("config: ") + name + " must be positive");
    };
    positive("tgraph_depth", tgraph_depth);
    positive("osm_threshold", osm_threshold);
    positive("anchor_impact", anchor_impact);
    positive("max_dnumber_length", max_dnumber_length);
    positive("unrelated_priority", unrelated_priority);
    positive("aging_factor", aging_factor);
    positive("aging_interval", aging_interval);
    positive("context_window", context_window);
    positive("watchdog_interval", watchdog_interval);
    positive("promote_threshold", promote_threshold);
    positive("checker_interval", checker_interval);
    if (page_budget < 1) throw ConfigError("config: page_budget must be >= 1");
    if (unrelated_priority >= 1.0)
        throw ConfigError("config: unrelated_priority must be below 1");
    if (osm_threshold > 1.0) throw ConfigError("config: osm_threshold must be <= 1");

    require_file("taxonomy_path", taxonomy_path);
    require_file("profile_path", profile_path);
    require_file("seeds_path", seeds_path);
    if (strategy == Strategy::treasure) require_file("tgraph_path", tgraph_path);
    if (fetch_mode == FetchMode::corpus) require_file("corpus_manifest", corpus_manifest);
    if (output_dir.empty()) throw ConfigError("config: missing required path 'output_dir'");
}

std::vector<std::string> load_seeds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open seeds file: " + path);
    std::vector<std::string> seeds;
    std::string line;
    while (std::getline(in, line)) {
        std::string url = trim(line);
        if (url.empty() || url[0] == '#') continue;
        seeds.push_back(std::move(url));
    }
    if (seeds.empty()) throw ConfigError("seeds file has no URLs: " + path);
    return seeds;
}

}  // namespace treasure
