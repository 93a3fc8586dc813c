#include "treasure/pagemodel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "treasure/url.hpp"

namespace treasure {
namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x110000) {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        auto semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out += text[i++];
            continue;
        }
        std::string_view name = text.substr(i + 1, semi - i - 1);
        if (name == "amp") out += '&';
        else if (name == "lt") out += '<';
        else if (name == "gt") out += '>';
        else if (name == "quot") out += '"';
        else if (name == "apos") out += '\'';
        else if (name == "nbsp") out += ' ';
        else if (!name.empty() && name[0] == '#') {
            unsigned long cp = 0;
            bool ok = false;
            try {
                if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                    cp = std::stoul(std::string(name.substr(2)), nullptr, 16), ok = name.size() > 2;
                else
                    cp = std::stoul(std::string(name.substr(1)), nullptr, 10), ok = true;
            } catch (...) {
                ok = false;
            }
            if (ok) append_utf8(out, cp);
        } else {
            out += text.substr(i, semi - i + 1);  // unknown entity, keep as-is
        }
        i = semi + 1;
    }
    return out;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

constexpr std::array<std::string_view, 21> kBlockTags = {
    "p",       "div",     "li",   "ul",     "ol",     "h1",     "h2",
    "h3",      "h4",      "h5",   "h6",     "td",     "th",     "tr",
    "table",   "section", "article", "blockquote", "pre", "dd", "dt"};

bool is_block_tag(std::string_view tag) {
    return std::find(kBlockTags.begin(), kBlockTags.end(), tag) != kBlockTags.end();
}

bool is_paragraph_like(std::string_view tag) {
    return tag == "p" || tag == "div" || tag == "blockquote" || tag == "section" ||
           tag == "article" || tag == "pre" || tag == "dd" || tag == "dt";
}

bool is_heading_or_cell(std::string_view tag) {
    return tag == "td" || tag == "th" ||
           (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6');
}

struct Attribute {
    std::string name;
    std::string value;
};

struct Tag {
    std::string name;
    bool closing = false;
    std::vector<Attribute> attrs;

    const std::string* attr(std::string_view name_) const {
        for (const auto& a : attrs)
            if (a.name == name_) return &a.value;
        return nullptr;
    }
};

class HtmlParser {
public:
    HtmlParser(std::string_view html, std::string_view base_url, const ParserOptions& options)
        : html_(html), options_(options) {
        doc_.url = normalize_url(base_url, base_url).value_or(std::string(base_url));
    }

    PageDocument run() {
        while (pos_ < html_.size()) {
            if (html_[pos_] == '<') {
                flush_text();
                handle_markup();
            } else {
                auto next = html_.find('<', pos_);
                text_ += html_.substr(pos_, next - pos_);
                pos_ = next == std::string_view::npos ? html_.size() : next;
            }
        }
        flush_text();
        finish_anchor();
        while (!regions_.empty()) pop_region();
        resolve_links();
        return std::move(doc_);
    }

private:
    struct Region {
        std::string tag;
        int block_id = -1;   // when paragraph-like
        int list_group = -1; // when li
        std::size_t start = 0;
    };

    struct OpenAnchor {
        std::string href;
        bool nofollow = false;
        std::size_t begin = 0;
        std::size_t depth = 0;  // region stack depth at open
        LinkContainer container = LinkContainer::other;
        int block_id = -1;
        int list_group = -1;
    };

    std::string_view html_;
    ParserOptions options_;
    PageDocument doc_;
    std::size_t pos_ = 0;
    std::string text_;
    bool in_title_ = false;
    std::vector<Region> regions_;
    std::vector<int> list_stack_;
    std::vector<OpenAnchor> anchor_;  // zero or one element

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void flush_text() {
        if (text_.empty()) return;
        std::string decoded = decode_entities(text_);
        text_.clear();
        if (in_title_) {
            if (!doc_.title.empty()) doc_.title += ' ';
            // trim for tidy titles
            std::size_t b = decoded.find_first_not_of(" \t\r\n");
            std::size_t e = decoded.find_last_not_of(" \t\r\n");
            if (b == std::string::npos) {
                if (!doc_.title.empty()) doc_.title.pop_back();
            } else {
                doc_.title += decoded.substr(b, e - b + 1);
            }
            return;
        }
        for (auto& tok : tokenize(decoded)) doc_.body_tokens.push_back(std::move(tok));
    }

    // --- tag scanning -------------------------------------------------

    void handle_markup() {
        if (html_.compare(pos_, 4, "<!--") == 0) {
            auto end = html_.find("-->", pos_ + 4);
            pos_ = end == std::string_view::npos ? html_.size() : end + 3;
            return;
        }
        if (pos_ + 1 < html_.size() && (html_[pos_ + 1] == '!' || html_[pos_ + 1] == '?')) {
            auto end = html_.find('>', pos_);
            pos_ = end == std::string_view::npos ? html_.size() : end + 1;
            return;
        }
        auto end = html_.find('>', pos_);
        if (end == std::string_view::npos) {  // truncated tag: discard the tail
            pos_ = html_.size();
            return;
        }
        std::string_view inside = html_.substr(pos_ + 1, end - pos_ - 1);
        pos_ = end + 1;
        Tag tag = parse_tag(inside);
        if (tag.name.empty()) return;
        if (!tag.closing && (tag.name == "script" || tag.name == "style")) {
            skip_raw_element(tag.name);
            return;
        }
        dispatch(tag);
    }

    static Tag parse_tag(std::string_view inside) {
        Tag tag;
        std::size_t i = 0;
        if (i < inside.size() && inside[i] == '/') {
            tag.closing = true;
            ++i;
        }
        std::size_t name_start = i;
        while (i < inside.size() &&
               (std::isalnum(static_cast<unsigned char>(inside[i])) || inside[i] == '-'))
            ++i;
        tag.name = lower_ascii(inside.substr(name_start, i - name_start));
        if (tag.closing) return tag;
        while (i < inside.size()) {
            while (i < inside.size() && (std::isspace(static_cast<unsigned char>(inside[i])) || inside[i] == '/'))
                ++i;
            std::size_t n0 = i;
            while (i < inside.size() && !std::isspace(static_cast<unsigned char>(inside[i])) &&
                   inside[i] != '=' && inside[i] != '/')
                ++i;
            if (i == n0) break;
            Attribute attr;
            attr.name = lower_ascii(inside.substr(n0, i - n0));
            while (i < inside.size() && std::isspace(static_cast<unsigned char>(inside[i]))) ++i;
            if (i < inside.size() && inside[i] == '=') {
                ++i;
                while (i < inside.size() && std::isspace(static_cast<unsigned char>(inside[i]))) ++i;
                if (i < inside.size() && (inside[i] == '"' || inside[i] == '\'')) {
                    char quote = inside[i++];
                    std::size_t v0 = i;
                    while (i < inside.size() && inside[i] != quote) ++i;
                    attr.value = decode_entities(inside.substr(v0, i - v0));
                    if (i < inside.size()) ++i;
                } else {
                    std::size_t v0 = i;
                    while (i < inside.size() && !std::isspace(static_cast<unsigned char>(inside[i])))
                        ++i;
                    attr.value = decode_entities(inside.substr(v0, i - v0));
                }
            }
            tag.attrs.push_back(std::move(attr));
        }
        return tag;
    }

    void skip_raw_element(std::string_view name) {
        std::string close = "</" + std::string(name);
        auto lower = lower_ascii(html_.substr(pos_));
        auto at = lower.find(close);
        if (at == std::string::npos) {
            pos_ = html_.size();
            return;
        }
        pos_ += at;
        auto gt = html_.find('>', pos_);
        pos_ = gt == std::string_view::npos ? html_.size() : gt + 1;
    }

    // --- structure ----------------------------------------------------

    std::size_t token_count() const { return doc_.body_tokens.size(); }

    void dispatch(const Tag& tag) {
        const std::string& name = tag.name;
        if (name == "a") {
            if (tag.closing) {
                finish_anchor();
            } else {
                finish_anchor();
                start_anchor(tag);
            }
            return;
        }
        if (name == "title") {
            in_title_ = !tag.closing;
            return;
        }
        if (!is_block_tag(name)) return;  // inline tags do not affect structure
        if (tag.closing)
            close_block(name);
        else
            open_block(name);
    }

    void open_block(const std::string& name) {
        // an opening block implicitly terminates a <p> or heading in progress
        while (!regions_.empty() &&
               (regions_.back().tag == "p" || is_heading_or_cell(regions_.back().tag)))
            pop_region();
        if (name == "ul" || name == "ol") {
            push_region(name);
            list_stack_.push_back(static_cast<int>(doc_.list_groups.size()));
            doc_.list_groups.emplace_back();
            return;
        }
        if (name == "li") {
            if (list_stack_.empty()) {
                push_region("li");  // orphan li acts as a plain block
                return;
            }
            // implicit close of the sibling item
            if (!regions_.empty() && regions_.back().tag == "li" &&
                regions_.back().list_group == list_stack_.back())
                pop_region();
            push_region("li");
            regions_.back().list_group = list_stack_.back();
            return;
        }
        push_region(name);
    }

    void close_block(const std::string& name) {
        bool present = std::any_of(regions_.begin(), regions_.end(), [&](const Region& r) {
            if (name == "ul" || name == "ol") return r.tag == "ul" || r.tag == "ol";
            return r.tag == name;
        });
        if (!present) return;
        while (!regions_.empty()) {
            std::string popped = regions_.back().tag;
            pop_region();
            if (popped == name || ((name == "ul" || name == "ol") && (popped == "ul" || popped == "ol")))
                break;
        }
    }

    void push_region(const std::string& tag) {
        Region region;
        region.tag = tag;
        region.start = token_count();
        if (is_paragraph_like(tag)) {
            region.block_id = static_cast<int>(doc_.blocks.size());
            doc_.blocks.emplace_back(region.start, npos);
        }
        regions_.push_back(std::move(region));
    }

    void pop_region() {
        Region region = std::move(regions_.back());
        regions_.pop_back();
        if (!anchor_.empty() && regions_.size() < anchor_.front().depth) finish_anchor();
        if (region.block_id >= 0) doc_.blocks[static_cast<std::size_t>(region.block_id)].second = token_count();
        if (region.tag == "li" && region.list_group >= 0) {
            doc_.list_groups[static_cast<std::size_t>(region.list_group)].emplace_back(region.start,
                                                                                       token_count());
        } else if ((region.tag == "ul" || region.tag == "ol") && !list_stack_.empty()) {
            list_stack_.pop_back();
        }
    }

    // --- anchors --------------------------------------------------------

    void start_anchor(const Tag& tag) {
        OpenAnchor anchor;
        const std::string* href = tag.attr("href");
        anchor.href = href ? *href : std::string();
        if (const std::string* rel = tag.attr("rel"))
            anchor.nofollow = lower_ascii(*rel).find("nofollow") != std::string::npos;
        anchor.begin = token_count();
        anchor.depth = regions_.size();
        anchor.container = LinkContainer::other;
        for (auto it = regions_.rbegin(); it != regions_.rend(); ++it) {
            if (it->tag == "li" && it->list_group >= 0) {
                anchor.container = LinkContainer::list_item;
                anchor.list_group = it->list_group;
                break;
            }
            if (it->block_id >= 0 && (it->tag == "p" || it->tag == "div")) {
                anchor.container = LinkContainer::paragraph;
                anchor.block_id = it->block_id;
                break;
            }
            if (is_heading_or_cell(it->tag)) break;  // headings and cells fall to `other`
        }
        anchor_.clear();
        anchor_.push_back(std::move(anchor));
    }

    void finish_anchor() {
        if (anchor_.empty()) return;
        flush_text();
        OpenAnchor anchor = std::move(anchor_.front());
        anchor_.clear();
        if (anchor.href.empty()) return;  // non-navigational anchor
        if (anchor.nofollow) {
            ++doc_.dropped_links;
            return;
        }
        auto normalized = normalize_url(anchor.href, doc_.url);
        if (!normalized || (normalized->rfind("http://", 0) != 0 && normalized->rfind("https://", 0) != 0)) {
            ++doc_.dropped_links;
            return;
        }
        Link link;
        link.target = std::move(*normalized);
        link.anchor_begin = anchor.begin;
        link.anchor_end = token_count();
        link.anchor_tokens.assign(doc_.body_tokens.begin() + static_cast<std::ptrdiff_t>(anchor.begin),
                                  doc_.body_tokens.begin() + static_cast<std::ptrdiff_t>(token_count()));
        link.container = anchor.container;
        link.block_id = anchor.block_id;
        link.list_group = anchor.list_group;
        doc_.links.push_back(std::move(link));
    }

    void resolve_links() {
        for (auto& block : doc_.blocks)
            if (block.second == npos) block.second = token_count();
        for (auto& link : doc_.links) {
            switch (link.container) {
                case LinkContainer::paragraph: {
                    const auto& block = doc_.blocks[static_cast<std::size_t>(link.block_id)];
                    link.position = link.anchor_begin - block.first;
                    break;
                }
                case LinkContainer::list_item: {
                    std::size_t offset = 0;
                    for (const auto& item : doc_.list_groups[static_cast<std::size_t>(link.list_group)]) {
                        if (link.anchor_begin >= item.first && link.anchor_begin <= item.second) {
                            offset += link.anchor_begin - item.first;
                            break;
                        }
                        offset += item.second - item.first;
                    }
                    link.position = offset;
                    break;
                }
                case LinkContainer::other: {
                    std::size_t w = options_.context_window;
                    std::size_t start = link.anchor_begin > w ? link.anchor_begin - w : 0;
                    link.position = link.anchor_begin - start;
                    break;
                }
            }
        }
    }
};

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
            current += static_cast<char>(c);
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

PageDocument parse_document(std::string_view html, std::string_view base_url,
                            const ParserOptions& options) {
    return HtmlParser(html, base_url, options).run();
}

LinkContext extract_context(const PageDocument& doc, const Link& link, std::size_t context_window) {
    auto same = [&](const Link& other) {
        return other.target == link.target && other.anchor_begin == link.anchor_begin &&
               other.anchor_end == link.anchor_end && other.container == link.container;
    };
    if (std::none_of(doc.links.begin(), doc.links.end(), same))
        throw std::invalid_argument("extract_context: link not in document");

    LinkContext ctx;
    ctx.link = link;
    auto emit_range = [&](std::size_t begin, std::size_t end, std::size_t base_pos) {
        for (std::size_t i = begin; i < end && i < doc.body_tokens.size(); ++i) {
            ctx.tokens.push_back({base_pos + (i - begin), doc.body_tokens[i],
                                  i >= link.anchor_begin && i < link.anchor_end});
        }
    };

    switch (link.container) {
        case LinkContainer::paragraph: {
            ctx.boundary_kind = ContextBoundary::paragraph;
            const auto& block = doc.blocks.at(static_cast<std::size_t>(link.block_id));
            emit_range(block.first, block.second, 0);
            break;
        }
        case LinkContainer::list_item: {
            ctx.boundary_kind = ContextBoundary::list_items;
            std::size_t offset = 0;
            for (const auto& item : doc.list_groups.at(static_cast<std::size_t>(link.list_group))) {
                emit_range(item.first, item.second, offset);
                offset += item.second - item.first;
            }
            break;
        }
        case LinkContainer::other: {
            ctx.boundary_kind = ContextBoundary::document;
            std::size_t start = link.anchor_begin > context_window ? link.anchor_begin - context_window : 0;
            std::size_t end = std::min(doc.body_tokens.size(), link.anchor_end + context_window);
            emit_range(start, end, 0);
            break;
        }
    }
    return ctx;
}

}  // namespace treasure
