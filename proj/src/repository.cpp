#include "treasure/repository.hpp"

#include <fstream>

#include <json.hpp>

namespace treasure {
namespace {

std::string kind_name(FetchKind kind) {
    switch (kind) {
        case FetchKind::ok: return "ok";
        case FetchKind::http_error: return "http_error";
        case FetchKind::net_error: return "net_error";
    }
    return "net_error";
}

FetchKind kind_from(const std::string& name) {
    if (name == "ok") return FetchKind::ok;
    if (name == "http_error") return FetchKind::http_error;
    return FetchKind::net_error;
}

}  // namespace

std::string record_to_json(const CrawlRecord& record) {
    nlohmann::json doc;
    doc["url"] = record.url;
    doc["version"] = record.version;
    doc["html_path"] = record.html_path;
    doc["outcome"] = {{"kind", kind_name(record.outcome.kind)},
                      {"status", record.outcome.status},
                      {"message", record.outcome.message}};
    nlohmann::json page;
    page["on_topic"] = record.page_decision.on_topic;
    if (record.page_decision.galaxy) {
        const auto& g = *record.page_decision.galaxy;
        page["galaxy"] = {{"prefix", g.prefix},
                          {"score", g.score},
                          {"support", g.support},
                          {"anchor_support", g.anchor_support}};
    } else {
        page["galaxy"] = nullptr;
    }
    if (record.page_decision.matched_code)
        page["matched_code"] = *record.page_decision.matched_code;
    else
        page["matched_code"] = nullptr;
    doc["page"] = std::move(page);
    nlohmann::json links = nlohmann::json::array();
    for (const auto& [url, priority] : record.link_scores) links.push_back({url, priority});
    doc["links"] = std::move(links);
    doc["stored_at"] = record.stored_at;
    return doc.dump();
}

CrawlRecord record_from_json(const std::string& line) {
    nlohmann::json doc = nlohmann::json::parse(line);
    CrawlRecord record;
    record.url = doc.at("url").get<std::string>();
    record.version = doc.at("version").get<int>();
    record.html_path = doc.at("html_path").get<std::string>();
    record.outcome.kind = kind_from(doc.at("outcome").at("kind").get<std::string>());
    record.outcome.status = doc.at("outcome").at("status").get<int>();
    record.outcome.message = doc.at("outcome").at("message").get<std::string>();
    const auto& page = doc.at("page");
    record.page_decision.on_topic = page.at("on_topic").get<bool>();
    if (!page.at("galaxy").is_null()) {
        GalaxyResult g;
        g.prefix = page["galaxy"].at("prefix").get<std::string>();
        g.score = page["galaxy"].at("score").get<double>();
        g.support = page["galaxy"].at("support").get<int>();
        g.anchor_support = page["galaxy"].at("anchor_support").get<int>();
        record.page_decision.galaxy = std::move(g);
    }
    if (!page.at("matched_code").is_null())
        record.page_decision.matched_code = page.at("matched_code").get<std::string>();
    for (const auto& entry : doc.at("links"))
        record.link_scores.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<double>());
    record.stored_at = doc.at("stored_at").get<std::int64_t>();
    return record;
}

Repository::Repository(const std::filesystem::path& root) : root_(root) {
    std::error_code ec;
    std::filesystem::create_directories(root_ / "pages", ec);
    if (ec) throw StoreError("cannot create repository at " + root_.string() + ": " + ec.message());
}

int Repository::store_page(CrawlRecord record, std::string_view html) {
    auto& chain = history_[record.url];
    record.version = static_cast<int>(chain.size()) + 1;

    if (record.outcome.kind == FetchKind::ok) {
        char name[48];
        std::snprintf(name, sizeof(name), "pages/r%06zu.html", records_.size() + 1);
        record.html_path = name;
        std::ofstream out(root_ / record.html_path, std::ios::binary);
        if (!out) throw StoreError("cannot write " + (root_ / record.html_path).string());
        out.write(html.data(), static_cast<std::streamsize>(html.size()));
        if (!out) throw StoreError("short write to " + (root_ / record.html_path).string());
    } else {
        record.html_path.clear();
    }

    chain.push_back(records_.size());
    records_.push_back(std::move(record));
    return records_.back().version;
}

std::vector<int> Repository::versions_of(const std::string& url) const {
    std::vector<int> out;
    auto it = history_.find(url);
    if (it == history_.end()) return out;
    for (std::size_t index : it->second) out.push_back(records_[index].version);
    return out;
}

std::optional<CrawlRecord> Repository::version(const std::string& url, int version) const {
    auto it = history_.find(url);
    if (it == history_.end() || version < 1 || version > static_cast<int>(it->second.size()))
        return std::nullopt;
    return records_[it->second[static_cast<std::size_t>(version) - 1]];
}

void Repository::audit() const {
    for (const auto& [url, chain] : history_) {
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const CrawlRecord& record = records_[chain[i]];
            if (record.version != static_cast<int>(i) + 1)
                throw StoreError("repository audit: version chain for " + url + " has gaps");
            if (record.url != url)
                throw StoreError("repository audit: record filed under wrong url " + url);
        }
    }
}

void Repository::flush_log() const {
    std::ofstream out(log_path(), std::ios::binary);
    if (!out) throw StoreError("cannot write crawl log: " + log_path().string());
    for (const auto& record : records_) out << record_to_json(record) << '\n';
    if (!out) throw StoreError("short write to crawl log: " + log_path().string());
}

std::vector<CrawlRecord> load_crawl_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot open crawl log: " + path);
    std::vector<CrawlRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(line));
        } catch (const nlohmann::json::exception& e) {
            throw StoreError(path + ":" + std::to_string(line_no) + ": bad record: " + e.what());
        }
    }
    return records;
}

}  // namespace treasure
