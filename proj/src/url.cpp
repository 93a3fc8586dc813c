#include "treasure/url.hpp"

#include <algorithm>
#include <cctype>

namespace treasure {
namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '+' || c == '-' || c == '.';
    });
}

struct Reference {
    std::string scheme;     // may be empty
    std::string authority;  // meaningful only when has_authority
    std::string path;
    std::string query;
    bool has_authority = false;
    bool has_query = false;
};

// Splits any URI reference (relative or absolute) into its components,
// dropping the fragment.
Reference split_reference(std::string_view s) {
    Reference ref;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);

    auto colon = s.find(':');
    auto slash = s.find('/');
    auto question = s.find('?');
    if (colon != std::string_view::npos &&
        (slash == std::string_view::npos || colon < slash) &&
        (question == std::string_view::npos || colon < question) &&
        valid_scheme(s.substr(0, colon))) {
        ref.scheme = to_lower(s.substr(0, colon));
        s = s.substr(colon + 1);
    }
    if (s.substr(0, 2) == "//") {
        s = s.substr(2);
        auto end = s.find_first_of("/?");
        ref.has_authority = true;
        ref.authority = std::string(s.substr(0, end));
        s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
    }
    if (auto q = s.find('?'); q != std::string_view::npos) {
        ref.has_query = true;
        ref.query = std::string(s.substr(q + 1));
        s = s.substr(0, q);
    }
    ref.path = std::string(s);
    return ref;
}

std::string merge_paths(const Reference& base, std::string_view ref_path) {
    if (base.has_authority && base.path.empty()) return "/" + std::string(ref_path);
    auto slash = base.path.rfind('/');
    if (slash == std::string::npos) return std::string(ref_path);
    return base.path.substr(0, slash + 1) + std::string(ref_path);
}

// Lower-cases the host and strips the scheme's default port.
std::optional<std::string> canonical_authority(std::string_view authority, std::string_view scheme) {
    std::string userinfo;
    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
        userinfo = std::string(authority.substr(0, at + 1));
        authority = authority.substr(at + 1);
    }
    std::string host;
    std::string port;
    if (!authority.empty() && authority.front() == '[') {  // IPv6 literal
        auto close = authority.find(']');
        if (close == std::string_view::npos) return std::nullopt;
        host = to_lower(authority.substr(0, close + 1));
        auto rest = authority.substr(close + 1);
        if (!rest.empty()) {
            if (rest.front() != ':') return std::nullopt;
            port = std::string(rest.substr(1));
        }
    } else {
        auto colon = authority.find(':');
        host = to_lower(authority.substr(0, colon));
        if (colon != std::string_view::npos) port = std::string(authority.substr(colon + 1));
    }
    if (host.empty()) return std::nullopt;
    if (!std::all_of(port.begin(), port.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    if ((scheme == "http" && port == "80") || (scheme == "https" && port == "443") || port == "")
        return userinfo + host;
    return userinfo + host + ":" + port;
}

std::string assemble(const Reference& ref) {
    std::string out = ref.scheme + "://" + ref.authority;
    out += ref.path.empty() ? "/" : ref.path;
    if (ref.has_query) out += "?" + ref.query;
    return out;
}

}  // namespace

std::string remove_dot_segments(std::string_view path) {
    std::string out;
    std::string in(path);
    while (!in.empty()) {
        if (in.rfind("../", 0) == 0) {
            in.erase(0, 3);
        } else if (in.rfind("./", 0) == 0) {
            in.erase(0, 2);
        } else if (in.rfind("/./", 0) == 0) {
            in.erase(0, 2);
        } else if (in == "/.") {
            in = "/";
        } else if (in.rfind("/../", 0) == 0 || in == "/..") {
            in = in == "/.." ? "/" : in.substr(3);
            auto slash = out.rfind('/');
            out.erase(slash == std::string::npos ? 0 : slash);
        } else if (in == "." || in == "..") {
            in.clear();
        } else {
            auto next = in.find('/', 1);
            out += in.substr(0, next);
            in.erase(0, next == std::string::npos ? in.size() : next);
        }
    }
    return out;
}

std::optional<UrlParts> parse_url(std::string_view absolute) {
    Reference ref = split_reference(absolute);
    if (ref.scheme.empty() || !ref.has_authority) return std::nullopt;
    auto canon = canonical_authority(ref.authority, ref.scheme);
    if (!canon) return std::nullopt;
    UrlParts parts;
    parts.scheme = ref.scheme;
    parts.authority = *canon;
    auto colon = canon->rfind(':');
    auto bracket = canon->rfind(']');
    if (colon != std::string::npos && (bracket == std::string::npos || colon > bracket)) {
        parts.host = canon->substr(0, colon);
        parts.port = canon->substr(colon + 1);
    } else {
        parts.host = *canon;
    }
    if (auto at = parts.host.rfind('@'); at != std::string::npos) parts.host.erase(0, at + 1);
    parts.path = ref.path.empty() ? "/" : remove_dot_segments(ref.path);
    parts.query = ref.query;
    parts.has_query = ref.has_query;
    return parts;
}

std::optional<std::string> normalize_url(std::string_view raw, std::string_view base) {
    // Strip surrounding ASCII whitespace; embedded whitespace makes a
    // reference unusable for fetching.
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
    if (raw.find_first_of(" \t\r\n") != std::string_view::npos) return std::nullopt;

    Reference r = split_reference(raw);
    Reference target;
    if (!r.scheme.empty()) {
        target = r;
        target.path = remove_dot_segments(r.path);
    } else {
        Reference b = split_reference(base);
        if (b.scheme.empty() || !b.has_authority) return std::nullopt;
        target.scheme = b.scheme;
        if (r.has_authority) {
            target.has_authority = true;
            target.authority = r.authority;
            target.path = remove_dot_segments(r.path);
            target.query = r.query;
            target.has_query = r.has_query;
        } else {
            target.has_authority = b.has_authority;
            target.authority = b.authority;
            if (r.path.empty()) {
                target.path = b.path;
                target.query = r.has_query ? r.query : b.query;
                target.has_query = r.has_query || b.has_query;
            } else {
                target.path = remove_dot_segments(
                    r.path.front() == '/' ? r.path : merge_paths(b, r.path));
                target.query = r.query;
                target.has_query = r.has_query;
            }
        }
    }
    if (!target.has_authority) return std::nullopt;
    auto canon = canonical_authority(target.authority, target.scheme);
    if (!canon) return std::nullopt;
    target.authority = *canon;
    return assemble(target);
}

}  // namespace treasure
