#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treasure/pagemodel.hpp"
#include "treasure/taxonomy.hpp"

namespace treasure {

struct DetectorParams {
    double anchor_impact = 1.40;
    std::size_t max_dnumber_length = 3;
};

struct PlotPoint {
    std::size_t position;  // token offset within the context
    std::string code;      // truncated
    std::size_t full_len;  // pre-truncation digit count, capped
    bool is_anchor;
};

struct PointCloud {
    std::vector<PlotPoint> points;
    double total_weight = 0.0;
};

struct GalaxyResult {
    std::string prefix;
    double score = 0.0;
    int support = 0;
    int anchor_support = 0;
};

struct TopicDecision {
    bool on_topic = false;
    std::optional<GalaxyResult> galaxy;
    std::optional<std::string> matched_code;
};

// anchor-weighted, length-weighted point for every taxonomy hit in the context
double point_weight(const PlotPoint& point, const DetectorParams& params);

PointCloud plot_points(const LinkContext& ctx, const Taxonomy& taxonomy,
                       const DetectorParams& params);

// Densest code-prefix region: S(q) = sum of weights of points whose code
// starts with q, score(q) = S(q) * |q| / max_len. Ties prefer the longer
// prefix, then more anchor support, then the lexicographically smaller one.
std::optional<GalaxyResult> detect_galaxy(const PointCloud& cloud, const DetectorParams& params);

TopicDecision classify_link(const LinkContext& ctx, const Taxonomy& taxonomy,
                            const TopicProfile& profile, const DetectorParams& params);

TopicDecision classify_page(const PageDocument& doc, const Taxonomy& taxonomy,
                            const TopicProfile& profile, const DetectorParams& params);

// Shared by link- and page-level classification: the profile match over an
// already-detected galaxy (prefix relation in either direction).
TopicDecision decide_from_cloud(const PointCloud& cloud, const TopicProfile& profile,
                                const DetectorParams& params);

}  // namespace treasure
