#include <chrono>
#include <ctime>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <vector>

#ifdef TREASURE_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "treasure/fetch.hpp"
#include "treasure/url.hpp"

namespace treasure {
namespace {

constexpr const char* kUserAgent = "treasure-crawler/1.0";

struct RobotsRule {
    bool allow = false;
    std::string prefix;
};

// Longest-prefix-match wins; ties prefer allow; empty rule set allows all.
bool robots_allows(const std::vector<RobotsRule>& rules, const std::string& path) {
    std::size_t best_len = 0;
    bool best_allow = true;
    for (const auto& rule : rules) {
        if (rule.prefix.empty()) continue;
        if (path.rfind(rule.prefix, 0) != 0) continue;
        if (rule.prefix.size() > best_len || (rule.prefix.size() == best_len && rule.allow)) {
            best_len = rule.prefix.size();
            best_allow = rule.allow;
        }
    }
    return best_allow;
}

std::vector<RobotsRule> parse_robots(const std::string& body) {
    std::vector<RobotsRule> rules;
    std::istringstream in(body);
    std::string line;
    bool group_applies = false;
    bool in_group_header = false;
    auto lower = [](std::string s) {
        for (char& c : s)
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        return s;
    };
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string field = lower(line.substr(0, colon));
        std::string value = line.substr(colon + 1);
        auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
        };
        trim(field);
        trim(value);
        if (field == "user-agent") {
            std::string agent = lower(value);
            if (!in_group_header) {
                group_applies = false;
                in_group_header = true;
            }
            if (agent == "*" || std::string(kUserAgent).find(agent) != std::string::npos)
                group_applies = true;
        } else if (field == "disallow" || field == "allow") {
            in_group_header = false;
            if (group_applies && !value.empty())
                rules.push_back({field == "allow", value});
        } else {
            in_group_header = false;
        }
    }
    return rules;
}

}  // namespace

struct LiveFetcher::Impl {
    int timeout_seconds;
    int per_host_delay_ms;
    std::unordered_map<std::string, std::vector<RobotsRule>> robots;
    std::unordered_map<std::string, std::chrono::steady_clock::time_point> last_hit;

    struct RawResult {
        bool transport_ok = false;
        int status = 0;
        std::string body;
        std::string error;
    };

    RawResult get(const UrlParts& parts, const std::string& path_query) {
        std::string origin = parts.scheme + "://" + parts.authority;
        RawResult result;
#ifndef TREASURE_HAVE_OPENSSL
        if (parts.scheme == "https") {
            result.error = "https support not built in";
            return result;
        }
#endif
        httplib::Client client(origin);
        client.set_connection_timeout(timeout_seconds, 0);
        client.set_read_timeout(timeout_seconds, 0);
        client.set_follow_location(true);
        client.set_default_headers({{"User-Agent", kUserAgent}});
#ifdef TREASURE_HAVE_OPENSSL
        client.enable_server_certificate_verification(false);
#endif
        auto res = client.Get(path_query);
        if (!res) {
            result.error = httplib::to_string(res.error());
            return result;
        }
        result.transport_ok = true;
        result.status = res->status;
        result.body = res->body;
        return result;
    }

    void politeness(const std::string& host) {
        auto now = std::chrono::steady_clock::now();
        auto it = last_hit.find(host);
        if (it != last_hit.end()) {
            auto earliest = it->second + std::chrono::milliseconds(per_host_delay_ms);
            if (now < earliest) std::this_thread::sleep_for(earliest - now);
        }
        last_hit[host] = std::chrono::steady_clock::now();
    }

    const std::vector<RobotsRule>& robots_for(const UrlParts& parts) {
        std::string origin = parts.scheme + "://" + parts.authority;
        auto it = robots.find(origin);
        if (it != robots.end()) return it->second;
        politeness(parts.host);
        RawResult result = get(parts, "/robots.txt");
        std::vector<RobotsRule> rules;
        if (result.transport_ok && result.status == 200) rules = parse_robots(result.body);
        return robots.emplace(origin, std::move(rules)).first->second;
    }
};

LiveFetcher::LiveFetcher(int timeout_seconds, int per_host_delay_ms) : impl_(new Impl) {
    impl_->timeout_seconds = timeout_seconds;
    impl_->per_host_delay_ms = per_host_delay_ms;
}

LiveFetcher::~LiveFetcher() = default;

FetchResponse LiveFetcher::fetch(const std::string& url) {
    FetchResponse response;
    response.url = url;
    response.fetched_at = static_cast<std::int64_t>(std::time(nullptr));

    auto parts = parse_url(url);
    if (!parts) {
        response.kind = FetchKind::net_error;
        response.message = "unparsable url";
        return response;
    }
    std::string path_query = parts->path + (parts->has_query ? "?" + parts->query : "");

    if (!robots_allows(impl_->robots_for(*parts), path_query)) {
        response.kind = FetchKind::net_error;
        response.message = "robots";
        return response;
    }

    Impl::RawResult result;
    for (int attempt = 0; attempt < 2; ++attempt) {  // one retry on network error
        impl_->politeness(parts->host);
        result = impl_->get(*parts, path_query);
        if (result.transport_ok) break;
    }
    response.fetched_at = static_cast<std::int64_t>(std::time(nullptr));
    if (!result.transport_ok) {
        response.kind = FetchKind::net_error;
        response.message = result.error;
        return response;
    }
    if (result.status != 200) {
        response.kind = FetchKind::http_error;
        response.status = result.status;
        response.message = "http status " + std::to_string(result.status);
        return response;
    }
    response.kind = FetchKind::ok;
    response.status = 200;
    response.body = std::move(result.body);
    return response;
}

}  // namespace treasure
