#include "treasure/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "treasure/pagemodel.hpp"
#include "treasure/porter.hpp"

namespace treasure {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto at = s.find(sep, start);
        out.emplace_back(s.substr(start, at - start));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return out;
}

// Stems every word of a term; multi-word phrases stay space-joined.
std::string stem_phrase(std::string_view raw) {
    std::string out;
    for (const auto& word : tokenize(raw)) {
        if (!out.empty()) out += ' ';
        out += porter_stem(word);
    }
    return out;
}

}  // namespace

std::optional<DNumber> DNumber::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_point) return std::nullopt;
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            seen_digit = true;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit || text.front() == '.' || text.back() == '.') return std::nullopt;
    DNumber d;
    d.digits_ = std::string(text);
    return d;
}

std::string DNumber::truncated(std::size_t max_len) const { return truncate_code(digits_, max_len); }

std::size_t DNumber::digit_count() const {
    return static_cast<std::size_t>(std::count_if(digits_.begin(), digits_.end(),
                                                  [](char c) { return c != '.'; }));
}

std::string stem_token(std::string_view word) {
    std::string lowered;
    lowered.reserve(word.size());
    for (char c : word)
        lowered += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    return porter_stem(lowered);
}

std::string truncate_code(std::string_view code, std::size_t max_len) {
    auto point = code.find('.');
    std::string_view head = code.substr(0, point);
    return std::string(head.substr(0, max_len));
}

Taxonomy Taxonomy::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TaxonomyError("cannot open taxonomy file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return from_lines(lines, path);
}

Taxonomy Taxonomy::from_lines(std::span<const std::string> lines, const std::string& origin) {
    Taxonomy tax;
    std::size_t line_no = 0;
    for (const auto& raw_line : lines) {
        ++line_no;
        std::string line = raw_line;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || trim(line)[0] == '#') continue;

        auto columns = split(line, '\t');
        if (columns.size() != 3)
            throw TaxonomyError(origin + ":" + std::to_string(line_no) +
                                ": expected 3 tab-separated columns, got " +
                                std::to_string(columns.size()));
        auto code = DNumber::parse(trim(columns[0]));
        if (!code)
            throw TaxonomyError(origin + ":" + std::to_string(line_no) + ": invalid code '" +
                                trim(columns[0]) + "'");
        TaxonomyEntry entry;
        entry.code = *code;
        entry.label = trim(columns[1]);
        for (const auto& piece : split(columns[2], ',')) {
            std::string raw = trim(piece);
            if (raw.empty()) continue;
            std::string stemmed = stem_phrase(raw);
            if (stemmed.empty()) continue;
            entry.raw_terms.push_back(raw);
            entry.terms.push_back(stemmed);
        }
        tax.entries_.push_back(std::move(entry));
    }
    if (tax.entries_.empty()) throw TaxonomyError(origin + ": empty taxonomy");

    for (const auto& entry : tax.entries_) {
        for (const auto& term : entry.terms) {
            auto& codes = tax.term_index_[term];
            if (std::find(codes.begin(), codes.end(), entry.code.digits()) == codes.end())
                codes.push_back(entry.code.digits());
            std::size_t words = static_cast<std::size_t>(
                                    std::count(term.begin(), term.end(), ' ')) + 1;
            tax.max_phrase_len_ = std::max(tax.max_phrase_len_, words);
        }
    }
    for (auto& [term, codes] : tax.term_index_) std::sort(codes.begin(), codes.end());
    return tax;
}

bool Taxonomy::has_code(std::string_view code) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const TaxonomyEntry& e) { return e.code.digits() == code; });
}

std::vector<TermHit> Taxonomy::lookup_terms(std::span<const std::string> tokens) const {
    std::vector<std::string> stems;
    stems.reserve(tokens.size());
    for (const auto& token : tokens) stems.push_back(porter_stem(token));

    std::vector<TermHit> hits;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t longest = std::min(max_phrase_len_, tokens.size() - i);
        bool matched = false;
        for (std::size_t len = longest; len >= 1; --len) {
            std::string probe = stems[i];
            for (std::size_t k = 1; k < len; ++k) {
                probe += ' ';
                probe += stems[i + k];
            }
            auto it = term_index_.find(probe);
            if (it != term_index_.end()) {
                hits.push_back({i, it->second});
                i += len;  // phrase words are consumed, not matched individually
                matched = true;
                break;
            }
        }
        if (!matched) ++i;
    }
    return hits;
}

std::vector<std::string> Taxonomy::raw_terms_for(const std::set<std::string>& codes, bool inside,
                                                 std::size_t max_len) const {
    std::vector<std::string> out;
    for (const auto& entry : entries_) {
        bool member = codes.count(entry.code.truncated(max_len)) > 0;
        if (member != inside) continue;
        out.insert(out.end(), entry.raw_terms.begin(), entry.raw_terms.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TopicProfile TopicProfile::load(const std::string& path, std::size_t max_len) {
    std::ifstream in(path);
    if (!in) throw TaxonomyError("cannot open profile file: " + path);
    TopicProfile profile;
    std::string line;
    while (std::getline(in, line)) {
        std::string code = trim(line);
        if (code.empty() || code[0] == '#') continue;
        auto parsed = DNumber::parse(code);
        if (!parsed) throw TaxonomyError("invalid profile code '" + code + "' in " + path);
        profile.codes.insert(parsed->truncated(max_len));
    }
    if (profile.codes.empty()) throw TaxonomyError("empty topic profile: " + path);
    return profile;
}

}  // namespace treasure
