#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treasure {

enum class LinkContainer { paragraph, list_item, other };
enum class ContextBoundary { paragraph, list_items, document };

struct Link {
    std::string target;  // absolute, normalized
    std::vector<std::string> anchor_tokens;
    LinkContainer container = LinkContainer::other;
    std::size_t position = 0;  // anchor's first-token offset within its context
    // Document-token coordinates of the anchor span and (for paragraph links)
    // the enclosing block.
    std::size_t anchor_begin = 0;
    std::size_t anchor_end = 0;
    int block_id = -1;
    int list_group = -1;
};

using TokenRange = std::pair<std::size_t, std::size_t>;  // [begin, end)

struct PageDocument {
    std::string url;
    std::string title;
    std::vector<std::string> body_tokens;
    std::vector<Link> links;
    std::vector<TokenRange> blocks;                      // paragraph-like element ranges
    std::vector<std::vector<TokenRange>> list_groups;    // per ul/ol: its item ranges
    std::size_t dropped_links = 0;                       // hrefs seen but not kept
};

struct ContextToken {
    std::size_t position;
    std::string text;
    bool is_anchor;
};

struct LinkContext {
    Link link;
    std::vector<ContextToken> tokens;
    ContextBoundary boundary_kind = ContextBoundary::document;
};

struct ParserOptions {
    std::size_t context_window = 50;  // half-width for links outside any block
};

// Lower-cased word split on non-alphanumeric bytes; multi-byte UTF-8
// sequences are kept inside tokens.
std::vector<std::string> tokenize(std::string_view text);

// Tolerant of arbitrary byte input: never throws, worst case yields an empty
// document. Scripts, styles and comments are excluded from the token stream.
PageDocument parse_document(std::string_view html, std::string_view base_url,
                            const ParserOptions& options = {});

// Break-point-delimited context for one of the document's links: the
// enclosing paragraph, all sibling list items, or a +/-window token slice.
// Throws std::invalid_argument when the link does not belong to the document.
LinkContext extract_context(const PageDocument& doc, const Link& link,
                            std::size_t context_window = 50);

}  // namespace treasure
