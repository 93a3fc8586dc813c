#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace treasure {

// Pieces of an absolute http(s)-style URL. `port` is empty when absent.
struct UrlParts {
    std::string scheme;
    std::string authority;  // host[:port], already lower-cased
    std::string host;
    std::string port;
    std::string path;
    std::string query;   // without '?'
    bool has_query = false;
};

std::optional<UrlParts> parse_url(std::string_view absolute);

// RFC 3986 path normalization ("." / ".." segment removal).
std::string remove_dot_segments(std::string_view path);

// Resolves `raw` against the absolute `base` and canonicalizes the result:
// lower-case scheme/host, default port stripped, fragment dropped,
// dot-segments collapsed. Returns nullopt when the reference cannot be made
// into an absolute URL.
std::optional<std::string> normalize_url(std::string_view raw, std::string_view base);

}  // namespace treasure
