#include "treasure/fetch.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace treasure {

CorpusFetcher::CorpusFetcher(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open corpus manifest: " + manifest_path);
    base_ = std::filesystem::path(manifest_path).parent_path();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(manifest_path + ":" + std::to_string(line_no) +
                                     ": bad manifest line: " + e.what());
        }
        Entry entry;
        entry.path = doc.at("path").get<std::string>();
        entry.status = doc.value("status", 200);
        entries_[doc.at("url").get<std::string>()] = std::move(entry);
    }
}

FetchResponse CorpusFetcher::fetch(const std::string& url) {
    FetchResponse response;
    response.url = url;
    response.fetched_at = 0;
    auto it = entries_.find(url);
    if (it == entries_.end()) {
        response.kind = FetchKind::http_error;
        response.status = 404;
        response.message = "not in corpus";
        return response;
    }
    if (it->second.status != 200) {
        response.kind = FetchKind::http_error;
        response.status = it->second.status;
        response.message = "corpus status";
        return response;
    }
    std::ifstream page(base_ / it->second.path, std::ios::binary);
    if (!page) {
        response.kind = FetchKind::net_error;
        response.message = "corpus file missing: " + it->second.path;
        return response;
    }
    std::ostringstream buf;
    buf << page.rdbuf();
    response.kind = FetchKind::ok;
    response.status = 200;
    response.body = buf.str();
    return response;
}

}  // namespace treasure
