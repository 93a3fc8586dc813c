#include "treasure/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace treasure {
namespace {

namespace fs = std::filesystem;

// splitmix64: small, fast, identical everywhere
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }

    const std::string& pick(const std::vector<std::string>& pool) {
        return pool[below(pool.size())];
    }

private:
    std::uint64_t state_;
};

const std::vector<std::string>& neutral_words() {
    static const std::vector<std::string> words = {
        "page",    "info",   "site",  "click",   "here",  "more",   "read",
        "next",    "item",   "entry", "note",    "misc",  "extra",  "general",
        "archive", "index",  "detail", "section", "update", "daily", "weekly",
        "report",  "corner", "board",  "thread",  "topic",  "forum", "post"};
    return words;
}

struct Page {
    std::string url;
    std::string file;
    std::string title;
    bool on_topic = false;
    // outgoing links in document order
    struct Out {
        std::size_t target;
        std::string anchor;
    };
    std::vector<Out> links;
};

std::string sentence(Rng& rng, const std::vector<std::string>& flavor,
                     const std::vector<std::string>& neutral, std::size_t words,
                     std::size_t flavor_percent) {
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
        if (!out.empty()) out += ' ';
        bool flavored = !flavor.empty() && rng.below(100) < flavor_percent;
        out += flavored ? rng.pick(flavor) : rng.pick(neutral);
    }
    return out;
}

std::string escape_html(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace

CorpusSpec CorpusSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open corpus spec: " + path);
    CorpusSpec spec;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
        return s;
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string::npos)
            throw CorpusError(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        auto parse_count = [&](const char* name) {
            try {
                return static_cast<std::size_t>(std::stoull(value));
            } catch (...) {
                throw CorpusError(std::string("corpus spec: bad number for ") + name + ": " + value);
            }
        };
        auto parse_terms = [&]() {
            std::vector<std::string> terms;
            std::size_t start = 0;
            while (start <= value.size()) {
                auto comma = value.find(',', start);
                std::string term = trim(value.substr(start, comma - start));
                if (!term.empty()) terms.push_back(term);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            return terms;
        };
        if (key == "total_pages") spec.total_pages = parse_count("total_pages");
        else if (key == "cluster_count") spec.cluster_count = parse_count("cluster_count");
        else if (key == "cluster_size") spec.cluster_size = parse_count("cluster_size");
        else if (key == "bridge_length") spec.bridge_length = parse_count("bridge_length");
        else if (key == "rng_seed") spec.rng_seed = parse_count("rng_seed");
        else if (key == "on_topic_terms") spec.on_topic_terms = parse_terms();
        else if (key == "off_topic_terms") spec.off_topic_terms = parse_terms();
        else
            throw CorpusError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return spec;
}

void CorpusSpec::validate() const {
    if (cluster_count < 1) throw CorpusError("corpus spec: cluster_count must be >= 1");
    if (cluster_size < 1) throw CorpusError("corpus spec: cluster_size must be >= 1");
    std::size_t cluster_pages = cluster_count * cluster_size;
    std::size_t bridge_pages = (cluster_count - 1) * bridge_length;
    if (total_pages < cluster_pages + bridge_pages)
        throw CorpusError("corpus spec: total_pages must cover clusters and bridges");
    if (on_topic_terms.empty()) throw CorpusError("corpus spec: on_topic_terms must not be empty");
}

CorpusPaths generate_corpus(const CorpusSpec& spec, const std::string& out_dir) {
    spec.validate();
    Rng rng(spec.rng_seed);

    const std::size_t clusters = spec.cluster_count;
    const std::size_t size = spec.cluster_size;
    const std::size_t bridge = spec.bridge_length;
    const std::size_t cluster_pages = clusters * size;
    const std::size_t bridge_pages = (clusters - 1) * bridge;
    const std::size_t filler_pages = spec.total_pages - cluster_pages - bridge_pages;

    std::vector<Page> pages;
    pages.reserve(spec.total_pages);
    auto cluster_page = [&](std::size_t c, std::size_t i) { return c * size + i; };
    auto bridge_page = [&](std::size_t gap, std::size_t j) {
        return cluster_pages + gap * bridge + j;
    };
    auto filler_page = [&](std::size_t f) { return cluster_pages + bridge_pages + f; };

    char buf[64];
    for (std::size_t c = 0; c < clusters; ++c) {
        for (std::size_t i = 0; i < size; ++i) {
            Page page;
            std::snprintf(buf, sizeof(buf), "http://corpus.test/c%zu/p%03zu", c, i);
            page.url = buf;
            std::snprintf(buf, sizeof(buf), "pages/c%zu_p%03zu.html", c, i);
            page.file = buf;
            page.on_topic = true;
            pages.push_back(std::move(page));
        }
    }
    for (std::size_t g = 0; g + 1 < clusters; ++g) {
        for (std::size_t j = 0; j < bridge; ++j) {
            Page page;
            std::snprintf(buf, sizeof(buf), "http://corpus.test/b%zu/s%zu", g, j);
            page.url = buf;
            std::snprintf(buf, sizeof(buf), "pages/b%zu_s%zu.html", g, j);
            page.file = buf;
            pages.push_back(std::move(page));
        }
    }
    for (std::size_t f = 0; f < filler_pages; ++f) {
        Page page;
        std::snprintf(buf, sizeof(buf), "http://corpus.test/f/p%05zu", f);
        page.url = buf;
        std::snprintf(buf, sizeof(buf), "pages/f_p%05zu.html", f);
        page.file = buf;
        pages.push_back(std::move(page));
    }

    // Filler allocation: two leaf distractors per cluster page while supply
    // lasts, the remainder spread evenly over the bridge pages (or over the
    // last cluster when there are no bridges). Leaves have no outlinks, so
    // they dilute breadth-first exploration without opening side doors
    // between clusters.
    std::size_t next_filler = 0;
    auto take_filler = [&]() -> std::size_t {
        return next_filler < filler_pages ? filler_page(next_filler++) : static_cast<std::size_t>(-1);
    };

    const std::vector<std::string>& neutral = neutral_words();
    auto on_anchor = [&]() {
        std::string anchor = rng.pick(spec.on_topic_terms);
        if (rng.below(2) == 0) anchor += ' ' + rng.pick(spec.on_topic_terms);
        return anchor;
    };
    auto off_anchor = [&]() { return rng.pick(neutral); };

    for (std::size_t c = 0; c < clusters; ++c) {
        for (std::size_t i = 0; i < size; ++i) {
            Page& page = pages[cluster_page(c, i)];
            if (size > 1)
                page.links.push_back({cluster_page(c, (i + 1) % size), on_anchor()});
            for (int extra = 0; extra < 2 && size > 2; ++extra) {
                std::size_t target = cluster_page(c, rng.below(size));
                if (target == cluster_page(c, i)) continue;
                page.links.push_back({target, on_anchor()});
            }
            if (i == 0 && c + 1 < clusters) {
                std::size_t exit_target =
                    bridge > 0 ? bridge_page(c, 0) : cluster_page(c + 1, 0);
                page.links.push_back({exit_target, off_anchor()});
            }
            for (int leaf = 0; leaf < 2; ++leaf) {
                std::size_t target = take_filler();
                if (target != static_cast<std::size_t>(-1))
                    page.links.push_back({target, off_anchor()});
            }
        }
    }
    for (std::size_t g = 0; g + 1 < clusters; ++g) {
        for (std::size_t j = 0; j < bridge; ++j) {
            Page& page = pages[bridge_page(g, j)];
            std::size_t next_hop = j + 1 < bridge ? bridge_page(g, j + 1) : cluster_page(g + 1, 0);
            page.links.push_back({next_hop, off_anchor()});  // next hop first in document order
        }
    }
    // leftover filler hangs off bridge pages (after their next-hop link) or
    // off the last cluster
    std::size_t sink = 0;
    while (next_filler < filler_pages) {
        std::size_t target = take_filler();
        Page* owner;
        if (bridge_pages > 0)
            owner = &pages[cluster_pages + (sink % bridge_pages)];
        else
            owner = &pages[cluster_page(clusters - 1, sink % size)];
        owner->links.push_back({target, off_anchor()});
        ++sink;
    }

    // --- page text -----------------------------------------------------

    for (auto& page : pages) {
        const auto& flavor = page.on_topic ? spec.on_topic_terms : spec.off_topic_terms;
        std::size_t flavor_percent = page.on_topic ? 55 : 30;
        page.title = sentence(rng, flavor, neutral, page.on_topic ? 3 : 2, flavor_percent);
    }

    fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root / "pages", ec);
    if (ec) throw CorpusError("cannot create corpus directory: " + ec.message());

    struct ParentRow {
        std::string child, parent, anchor, surrounding, title, body_path;
    };
    std::vector<ParentRow> parent_rows;

    for (auto& page : pages) {
        const auto& flavor = page.on_topic ? spec.on_topic_terms : spec.off_topic_terms;
        std::size_t flavor_percent = page.on_topic ? 55 : 30;

        std::string html = "<html><head><title>" + escape_html(page.title) +
                           "</title></head>\n<body>\n";
        html += "<p>" + escape_html(sentence(rng, flavor, neutral, 12 + rng.below(7),
                                             flavor_percent)) + "</p>\n";
        for (const auto& link : page.links) {
            std::string lead = sentence(rng, flavor, neutral, 3 + rng.below(4), flavor_percent);
            std::string tail = sentence(rng, flavor, neutral, 3 + rng.below(4), flavor_percent);
            const Page& target = pages[link.target];
            html += "<p>" + escape_html(lead) + " <a href=\"" + target.url + "\">" +
                    escape_html(link.anchor) + "</a> " + escape_html(tail) + "</p>\n";
            parent_rows.push_back({target.url, page.url, link.anchor,
                                   lead + " " + link.anchor + " " + tail, page.title, page.file});
        }
        html += "<p>" + escape_html(sentence(rng, flavor, neutral, 10 + rng.below(7),
                                             flavor_percent)) + "</p>\n";
        html += "</body></html>\n";

        std::ofstream out(root / page.file, std::ios::binary);
        if (!out) throw CorpusError("cannot write corpus page: " + page.file);
        out << html;
    }

    CorpusPaths paths;
    paths.manifest = (root / "manifest.jsonl").string();
    paths.labels = (root / "labels.tsv").string();
    paths.parents = (root / "parents.tsv").string();
    paths.seeds = (root / "seeds.txt").string();
    paths.targets = (root / "targets.txt").string();

    {
        std::ofstream out(paths.manifest, std::ios::binary);
        for (const auto& page : pages)
            out << "{\"url\":\"" << page.url << "\",\"path\":\"" << page.file
                << "\",\"status\":200}\n";
        if (!out) throw CorpusError("cannot write manifest");
    }
    {
        std::ofstream out(paths.labels, std::ios::binary);
        for (const auto& page : pages) out << page.url << '\t' << (page.on_topic ? 1 : 0) << '\n';
        if (!out) throw CorpusError("cannot write labels");
    }
    {
        std::ofstream out(paths.parents, std::ios::binary);
        for (const auto& row : parent_rows)
            out << row.child << '\t' << row.parent << '\t' << row.anchor << '\t'
                << row.surrounding << '\t' << row.title << '\t' << row.body_path << '\n';
        if (!out) throw CorpusError("cannot write parent map");
    }
    {
        std::ofstream out(paths.seeds, std::ios::binary);
        out << pages[0].url << '\n';
        if (!out) throw CorpusError("cannot write seeds");
    }
    {
        std::ofstream out(paths.targets, std::ios::binary);
        std::vector<std::string> targets;
        for (std::size_t q = 0; q < 4; ++q) {
            std::size_t i = std::min(size - 1, q * size / 4);
            const std::string& url = pages[cluster_page(0, i)].url;
            if (std::find(targets.begin(), targets.end(), url) == targets.end())
                targets.push_back(url);
        }
        for (const auto& url : targets) out << url << '\n';
        if (!out) throw CorpusError("cannot write targets");
    }
    return paths;
}

}  // namespace treasure
