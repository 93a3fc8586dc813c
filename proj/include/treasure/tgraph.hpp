#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treasure/pagemodel.hpp"

namespace treasure {

struct TGraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using TfVector = std::unordered_map<std::string, double>;

// Stemmed term-frequency vector over pre-tokenized words.
TfVector make_tf(std::span<const std::string> tokens);
// Same, but tokenizes the text first.
TfVector make_tf_text(std::string_view text);

// Cosine similarity; 0 when either vector is empty.
double text_similarity(const TfVector& a, const TfVector& b);

struct TGraphNode {
    int id = 0;
    int level = 0;
    std::string url;
    std::string anchor_text;
    std::string surrounding_text;
    std::string title_text;
    std::string body_text;
    // caches derived from the four texts
    TfVector anchor_tf, surrounding_tf, title_tf, body_tf;

    void rebuild_tf();
};

// How a parent page refers to a child URL, plus the parent's own texts.
struct ParentEdge {
    std::string parent_url;
    std::string anchor_text;
    std::string surrounding_text;
    std::string title_text;
    std::string body_text;
};

struct PageTexts {
    std::string title;
    std::string body;
};

// Answers "which pages link to URL u, and with what texts". Deterministic
// for a fixed backing store.
class ParentProvider {
public:
    virtual ~ParentProvider() = default;
    virtual std::vector<ParentEdge> parents_of(const std::string& url) const = 0;
    virtual std::optional<PageTexts> page_texts(const std::string& url) const = 0;
};

class MapParentProvider : public ParentProvider {
public:
    void add_parent(const std::string& child, ParentEdge edge);
    void set_page(const std::string& url, PageTexts texts);

    std::vector<ParentEdge> parents_of(const std::string& url) const override;
    std::optional<PageTexts> page_texts(const std::string& url) const override;

private:
    std::unordered_map<std::string, std::vector<ParentEdge>> by_child_;
    std::unordered_map<std::string, PageTexts> pages_;
};

// TSV backing: child_url \t parent_url \t anchor \t surrounding \t title \t body_path.
// body_path is resolved relative to the TSV's directory; HTML files are
// reduced to their visible text.
class TsvParentProvider : public ParentProvider {
public:
    explicit TsvParentProvider(const std::string& path);

    std::vector<ParentEdge> parents_of(const std::string& url) const override;
    std::optional<PageTexts> page_texts(const std::string& url) const override;

private:
    std::unordered_map<std::string, std::vector<ParentEdge>> by_child_;
    std::unordered_map<std::string, PageTexts> pages_;
};

struct TGraphParams {
    int depth = 3;
    int max_parents_per_node = 5;
};

struct OsmParams {
    double osm_threshold = 0.05;
    double unrelated_priority = 0.01;
};

struct WatchdogParams {
    bool enabled = false;
    std::size_t interval = 500;
    double promote_threshold = 0.5;
    std::size_t max_nodes = 20;
};

// An on-topic page the crawler saw; candidate for watchdog promotion.
struct PageExperience {
    std::string url;
    std::string title;
    std::string body;
};

class TGraph {
public:
    // Bottom-up construction: level 0 holds the targets, level k+1 one node
    // per (parent page, child node) pair, fan-out capped in provider order.
    static TGraph build(std::span<const std::string> targets, const ParentProvider& provider,
                        const TGraphParams& params = {});

    static TGraph load(const std::string& path);
    void save(const std::string& path) const;

    const std::vector<TGraphNode>& nodes() const { return nodes_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int depth() const { return depth_; }

    // Shortest edge count from the node to any level-0 node.
    int distance_to_target(int id) const { return dist_.at(static_cast<std::size_t>(id)); }

    // Appends qualifying pages as level-1 nodes (never removes anything);
    // returns how many were added. Total additions are capped across calls.
    int promote_experiences(std::span<const PageExperience> pages, const WatchdogParams& params);

    bool structurally_equal(const TGraph& other) const;

private:
    void validate_and_finalize(const std::string& origin);

    std::vector<TGraphNode> nodes_;
    std::vector<std::pair<int, int>> edges_;  // (child id, parent id), one level apart
    int depth_ = 3;
    std::vector<int> dist_;
    std::size_t watchdog_added_ = 0;
};

// The four texts a link offers for comparison against a node.
struct LinkSignal {
    TfVector anchor;
    TfVector surrounding;
    TfVector title;
    TfVector body;
};

LinkSignal make_link_signal(const LinkContext& ctx, const PageDocument& parent_doc);

// Mean of the four component similarities, in [0, 1].
double compute_osm(const LinkSignal& signal, const TGraphNode& node);

// Max over threshold-passing nodes of 1/max(d,1); unrelated_priority when no
// node qualifies.
double score_link(const LinkSignal& signal, const TGraph& graph, const OsmParams& params);

}  // namespace treasure
