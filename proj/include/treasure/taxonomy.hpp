#pragma once

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace treasure {

struct TaxonomyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Dewey classification code in its source form, e.g. "155.95": decimal
// digits with at most one point.
class DNumber {
public:
    static std::optional<DNumber> parse(std::string_view text);

    const std::string& digits() const { return digits_; }
    // Digits with the point and everything after it removed, cut to max_len.
    std::string truncated(std::size_t max_len) const;
    // Count of digits ignoring the point.
    std::size_t digit_count() const;

    bool operator==(const DNumber&) const = default;

private:
    std::string digits_;
};

// Lower-cases, then applies the Porter stemmer.
std::string stem_token(std::string_view word);

// Drops the decimal point and everything after it, keeps the first max_len
// digits. Idempotent.
std::string truncate_code(std::string_view code, std::size_t max_len);

struct TaxonomyEntry {
    DNumber code;
    std::string label;
    std::vector<std::string> terms;      // stemmed, space-joined phrases
    std::vector<std::string> raw_terms;  // as authored in the source file
};

struct TermHit {
    std::size_t position;              // index of the first matched token
    std::vector<std::string> codes;    // source-form codes, sorted and unique
};

class Taxonomy {
public:
    // TSV: code \t label \t comma-separated terms. '#' lines are comments.
    static Taxonomy load(const std::string& path);
    static Taxonomy from_lines(std::span<const std::string> lines, const std::string& origin);

    const std::vector<TaxonomyEntry>& entries() const { return entries_; }
    std::size_t max_phrase_len() const { return max_phrase_len_; }
    bool has_code(std::string_view code) const;

    // Greedy longest-phrase-first scan over already lower-cased tokens;
    // stemming happens inside. Matched phrase tokens are consumed.
    std::vector<TermHit> lookup_terms(std::span<const std::string> tokens) const;

    // Raw terms of every entry whose truncated code is (not) in `codes`;
    // handy for building word pools.
    std::vector<std::string> raw_terms_for(const std::set<std::string>& codes, bool inside,
                                           std::size_t max_len) const;

private:
    std::vector<TaxonomyEntry> entries_;
    std::unordered_map<std::string, std::vector<std::string>> term_index_;
    std::size_t max_phrase_len_ = 1;
};

// Truncated codes defining the crawler's specialization.
struct TopicProfile {
    std::set<std::string> codes;

    // One code per line, '#' comments. Codes are truncated on load.
    static TopicProfile load(const std::string& path, std::size_t max_len);
};

}  // namespace treasure
