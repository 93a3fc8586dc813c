#include "treasure/tgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "treasure/porter.hpp"

namespace treasure {
namespace {

constexpr std::string_view kFormatTag = "tgraph-v1";

std::string join_tokens(std::span<const std::string> tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TGraphError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TfVector make_tf(std::span<const std::string> tokens) {
    TfVector tf;
    for (const auto& token : tokens) tf[porter_stem(token)] += 1.0;
    return tf;
}

TfVector make_tf_text(std::string_view text) {
    auto tokens = tokenize(text);
    return make_tf(tokens);
}

double text_similarity(const TfVector& a, const TfVector& b) {
    if (a.empty() || b.empty()) return 0.0;
    const TfVector& small = a.size() <= b.size() ? a : b;
    const TfVector& large = a.size() <= b.size() ? b : a;
    double dot = 0.0;
    for (const auto& [term, count] : small) {
        auto it = large.find(term);
        if (it != large.end()) dot += count * it->second;
    }
    if (dot == 0.0) return 0.0;
    double na = 0.0, nb = 0.0;
    for (const auto& [term, count] : a) na += count * count;
    for (const auto& [term, count] : b) nb += count * count;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

void TGraphNode::rebuild_tf() {
    anchor_tf = make_tf_text(anchor_text);
    surrounding_tf = make_tf_text(surrounding_text);
    title_tf = make_tf_text(title_text);
    body_tf = make_tf_text(body_text);
}

// --- providers ------------------------------------------------------------

void MapParentProvider::add_parent(const std::string& child, ParentEdge edge) {
    by_child_[child].push_back(std::move(edge));
}

void MapParentProvider::set_page(const std::string& url, PageTexts texts) {
    pages_[url] = std::move(texts);
}

std::vector<ParentEdge> MapParentProvider::parents_of(const std::string& url) const {
    auto it = by_child_.find(url);
    return it == by_child_.end() ? std::vector<ParentEdge>{} : it->second;
}

std::optional<PageTexts> MapParentProvider::page_texts(const std::string& url) const {
    auto it = pages_.find(url);
    if (it == pages_.end()) return std::nullopt;
    return it->second;
}

TsvParentProvider::TsvParentProvider(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TGraphError("cannot open parent map: " + path);
    std::filesystem::path dir = std::filesystem::path(path).parent_path();
    std::unordered_map<std::string, std::string> body_cache;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cols.size() != 6)
            throw TGraphError(path + ":" + std::to_string(line_no) +
                              ": expected 6 tab-separated columns");
        ParentEdge edge;
        edge.parent_url = cols[1];
        edge.anchor_text = cols[2];
        edge.surrounding_text = cols[3];
        edge.title_text = cols[4];
        if (!cols[5].empty()) {
            auto cached = body_cache.find(cols[5]);
            if (cached == body_cache.end()) {
                std::string raw = read_file((dir / cols[5]).string());
                std::string body;
                if (raw.find('<') != std::string::npos) {
                    PageDocument doc = parse_document(raw, "http://parent.map/");
                    body = join_tokens(doc.body_tokens);
                } else {
                    body = raw;
                }
                cached = body_cache.emplace(cols[5], std::move(body)).first;
            }
            edge.body_text = cached->second;
        }
        if (!pages_.count(edge.parent_url))
            pages_[edge.parent_url] = PageTexts{edge.title_text, edge.body_text};
        by_child_[cols[0]].push_back(std::move(edge));
    }
}

std::vector<ParentEdge> TsvParentProvider::parents_of(const std::string& url) const {
    auto it = by_child_.find(url);
    return it == by_child_.end() ? std::vector<ParentEdge>{} : it->second;
}

std::optional<PageTexts> TsvParentProvider::page_texts(const std::string& url) const {
    auto it = pages_.find(url);
    if (it == pages_.end()) return std::nullopt;
    return it->second;
}

// --- graph ------------------------------------------------------------------

TGraph TGraph::build(std::span<const std::string> targets, const ParentProvider& provider,
                     const TGraphParams& params) {
    if (targets.empty()) throw TGraphError("tgraph build: no target documents");
    if (params.depth < 1) throw TGraphError("tgraph build: depth must be >= 1");

    std::string unresolved;
    for (const auto& url : targets) {
        if (!provider.page_texts(url) && provider.parents_of(url).empty())
            unresolved += unresolved.empty() ? url : ", " + url;
    }
    if (!unresolved.empty())
        throw TGraphError("tgraph build: targets not resolvable by provider: " + unresolved);

    TGraph graph;
    graph.depth_ = params.depth;
    for (const auto& url : targets) {
        TGraphNode node;
        node.id = static_cast<int>(graph.nodes_.size());
        node.level = 0;
        node.url = url;
        if (auto texts = provider.page_texts(url)) {
            node.title_text = texts->title;
            node.body_text = texts->body;
        }
        graph.nodes_.push_back(std::move(node));
    }

    std::size_t level_begin = 0;
    for (int level = 0; level < params.depth; ++level) {
        std::size_t level_end = graph.nodes_.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            auto edges = provider.parents_of(graph.nodes_[i].url);
            std::vector<std::string> seen;
            int taken = 0;
            for (const auto& edge : edges) {
                if (taken >= params.max_parents_per_node) break;
                if (std::find(seen.begin(), seen.end(), edge.parent_url) != seen.end())
                    continue;  // one node per (parent page, child node) pair
                seen.push_back(edge.parent_url);
                TGraphNode node;
                node.id = static_cast<int>(graph.nodes_.size());
                node.level = level + 1;
                node.url = edge.parent_url;
                node.anchor_text = edge.anchor_text;
                node.surrounding_text = edge.surrounding_text;
                node.title_text = edge.title_text;
                node.body_text = edge.body_text;
                graph.edges_.emplace_back(graph.nodes_[i].id, node.id);
                graph.nodes_.push_back(std::move(node));
                ++taken;
            }
        }
        level_begin = level_end;
    }
    graph.validate_and_finalize("built graph");
    return graph;
}

void TGraph::validate_and_finalize(const std::string& origin) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != static_cast<int>(i))
            throw TGraphError(origin + ": node ids must be dense and ordered");
        if (nodes_[i].level < 0 || nodes_[i].level > depth_)
            throw TGraphError(origin + ": node level out of range");
    }
    bool has_target = false;
    for (const auto& node : nodes_) has_target = has_target || node.level == 0;
    if (!nodes_.empty() && !has_target) throw TGraphError(origin + ": no level-0 nodes");

    std::vector<std::vector<int>> parents_of_child(nodes_.size());
    for (const auto& [child, parent] : edges_) {
        if (child < 0 || parent < 0 || child >= static_cast<int>(nodes_.size()) ||
            parent >= static_cast<int>(nodes_.size()))
            throw TGraphError(origin + ": edge references unknown node");
        if (nodes_[static_cast<std::size_t>(parent)].level !=
            nodes_[static_cast<std::size_t>(child)].level + 1)
            throw TGraphError(origin + ": edge does not span exactly one level");
        parents_of_child[static_cast<std::size_t>(child)].push_back(parent);
    }

    dist_.assign(nodes_.size(), std::numeric_limits<int>::max());
    std::deque<int> queue;
    for (const auto& node : nodes_) {
        if (node.level == 0) {
            dist_[static_cast<std::size_t>(node.id)] = 0;
            queue.push_back(node.id);
        }
    }
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        for (int parent : parents_of_child[static_cast<std::size_t>(id)]) {
            if (dist_[static_cast<std::size_t>(parent)] != std::numeric_limits<int>::max())
                continue;
            dist_[static_cast<std::size_t>(parent)] = dist_[static_cast<std::size_t>(id)] + 1;
            queue.push_back(parent);
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (dist_[i] == std::numeric_limits<int>::max())
            throw TGraphError(origin + ": node " + std::to_string(i) +
                              " has no path to the target level");
    }
    for (auto& node : nodes_) node.rebuild_tf();
}

void TGraph::save(const std::string& path) const {
    nlohmann::json doc;
    doc["format"] = kFormatTag;
    doc["depth"] = depth_;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& node : nodes_) {
        doc["nodes"].push_back({{"id", node.id},
                                {"level", node.level},
                                {"url", node.url},
                                {"anchor_text", node.anchor_text},
                                {"surrounding_text", node.surrounding_text},
                                {"title_text", node.title_text},
                                {"body_text", node.body_text}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& [child, parent] : edges_) doc["edges"].push_back({child, parent});

    std::ofstream out(path, std::ios::binary);
    if (!out) throw TGraphError("cannot write tgraph file: " + path);
    out << doc.dump(2) << '\n';
}

TGraph TGraph::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TGraphError("no such file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw TGraphError("malformed tgraph file " + path + ": " + e.what());
    }
    try {
        if (!doc.contains("format") || doc["format"].get<std::string>() != kFormatTag)
            throw TGraphError("tgraph file " + path + ": unknown or missing format tag");
        TGraph graph;
        graph.depth_ = doc.at("depth").get<int>();
        for (const auto& n : doc.at("nodes")) {
            TGraphNode node;
            node.id = n.at("id").get<int>();
            node.level = n.at("level").get<int>();
            node.url = n.at("url").get<std::string>();
            node.anchor_text = n.at("anchor_text").get<std::string>();
            node.surrounding_text = n.at("surrounding_text").get<std::string>();
            node.title_text = n.at("title_text").get<std::string>();
            node.body_text = n.at("body_text").get<std::string>();
            graph.nodes_.push_back(std::move(node));
        }
        for (const auto& e : doc.at("edges"))
            graph.edges_.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        graph.validate_and_finalize(path);
        return graph;
    } catch (const nlohmann::json::exception& e) {
        throw TGraphError("malformed tgraph file " + path + ": " + e.what());
    }
}

int TGraph::promote_experiences(std::span<const PageExperience> pages,
                                const WatchdogParams& params) {
    if (!params.enabled) return 0;
    int added = 0;
    for (const auto& page : pages) {
        if (watchdog_added_ >= params.max_nodes) break;
        LinkSignal signal;
        signal.title = make_tf_text(page.title);
        signal.body = make_tf_text(page.body);
        double best = 0.0;
        int best_target = -1;
        for (const auto& node : nodes_) {
            if (node.level != 0) continue;
            double osm = compute_osm(signal, node);
            if (osm > best) {
                best = osm;
                best_target = node.id;
            }
        }
        if (best_target < 0 || best < params.promote_threshold) continue;
        TGraphNode node;
        node.id = static_cast<int>(nodes_.size());
        node.level = 1;
        node.url = page.url;
        node.title_text = page.title;
        node.body_text = page.body;
        node.rebuild_tf();
        edges_.emplace_back(best_target, node.id);
        dist_.push_back(1);
        nodes_.push_back(std::move(node));
        ++watchdog_added_;
        ++added;
    }
    return added;
}

bool TGraph::structurally_equal(const TGraph& other) const {
    if (depth_ != other.depth_ || nodes_.size() != other.nodes_.size() ||
        edges_ != other.edges_)
        return false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& a = nodes_[i];
        const auto& b = other.nodes_[i];
        if (a.id != b.id || a.level != b.level || a.url != b.url ||
            a.anchor_text != b.anchor_text || a.surrounding_text != b.surrounding_text ||
            a.title_text != b.title_text || a.body_text != b.body_text)
            return false;
    }
    return true;
}

// --- scoring ----------------------------------------------------------------

LinkSignal make_link_signal(const LinkContext& ctx, const PageDocument& parent_doc) {
    LinkSignal signal;
    signal.anchor = make_tf(ctx.link.anchor_tokens);
    std::vector<std::string> context_tokens;
    context_tokens.reserve(ctx.tokens.size());
    for (const auto& t : ctx.tokens) context_tokens.push_back(t.text);
    signal.surrounding = make_tf(context_tokens);
    signal.title = make_tf_text(parent_doc.title);
    signal.body = make_tf(parent_doc.body_tokens);
    return signal;
}

double compute_osm(const LinkSignal& signal, const TGraphNode& node) {
    return (text_similarity(signal.anchor, node.anchor_tf) +
            text_similarity(signal.surrounding, node.surrounding_tf) +
            text_similarity(signal.title, node.title_tf) +
            text_similarity(signal.body, node.body_tf)) /
           4.0;
}

double score_link(const LinkSignal& signal, const TGraph& graph, const OsmParams& params) {
    double best = 0.0;
    bool any = false;
    for (const auto& node : graph.nodes()) {
        if (compute_osm(signal, node) < params.osm_threshold) continue;
        int d = std::max(graph.distance_to_target(node.id), 1);
        best = std::max(best, 1.0 / static_cast<double>(d));
        any = true;
    }
    return any ? best : params.unrelated_priority;
}

}  // namespace treasure
