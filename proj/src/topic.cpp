#include "treasure/topic.hpp"

#include <algorithm>
#include <map>

namespace treasure {
namespace {

struct PrefixStats {
    double mass = 0.0;
    int support = 0;
    int anchor_support = 0;
};

PointCloud plot_tokens(const std::vector<ContextToken>& tokens, const Taxonomy& taxonomy,
                       const DetectorParams& params) {
    PointCloud cloud;
    std::vector<std::string> texts;
    texts.reserve(tokens.size());
    for (const auto& t : tokens) texts.push_back(t.text);

    for (const auto& hit : taxonomy.lookup_terms(texts)) {
        const ContextToken& first = tokens[hit.position];
        for (const auto& code : hit.codes) {
            auto parsed = DNumber::parse(code);
            if (!parsed) continue;
            PlotPoint point;
            point.position = first.position;
            point.code = parsed->truncated(params.max_dnumber_length);
            point.full_len = std::min(parsed->digit_count(), params.max_dnumber_length);
            point.is_anchor = first.is_anchor;
            cloud.total_weight += point_weight(point, params);
            cloud.points.push_back(std::move(point));
        }
    }
    return cloud;
}

}  // namespace

double point_weight(const PlotPoint& point, const DetectorParams& params) {
    double anchor = point.is_anchor ? params.anchor_impact : 1.0;
    return anchor * static_cast<double>(point.full_len) /
           static_cast<double>(params.max_dnumber_length);
}

PointCloud plot_points(const LinkContext& ctx, const Taxonomy& taxonomy,
                       const DetectorParams& params) {
    return plot_tokens(ctx.tokens, taxonomy, params);
}

std::optional<GalaxyResult> detect_galaxy(const PointCloud& cloud, const DetectorParams& params) {
    if (cloud.points.empty()) return std::nullopt;

    // Ordered map keeps accumulation deterministic; per-prefix sums add point
    // weights in point order, which the enumeration oracle reproduces exactly.
    std::map<std::string, PrefixStats> stats;
    for (const auto& point : cloud.points) {
        double w = point_weight(point, params);
        std::size_t max_len = std::min(point.code.size(), params.max_dnumber_length);
        for (std::size_t len = 1; len <= max_len; ++len) {
            auto& s = stats[point.code.substr(0, len)];
            s.mass += w;
            s.support += 1;
            if (point.is_anchor) s.anchor_support += 1;
        }
    }

    std::optional<GalaxyResult> best;
    for (const auto& [prefix, s] : stats) {
        GalaxyResult candidate{prefix,
                               s.mass * static_cast<double>(prefix.size()) /
                                   static_cast<double>(params.max_dnumber_length),
                               s.support, s.anchor_support};
        if (!best) {
            best = candidate;
            continue;
        }
        bool better = false;
        if (candidate.score > best->score) {
            better = true;
        } else if (candidate.score == best->score) {
            if (candidate.prefix.size() > best->prefix.size()) {
                better = true;
            } else if (candidate.prefix.size() == best->prefix.size()) {
                if (candidate.anchor_support > best->anchor_support)
                    better = true;
                else if (candidate.anchor_support == best->anchor_support &&
                         candidate.prefix < best->prefix)
                    better = true;
            }
        }
        if (better) best = candidate;
    }
    return best;
}

TopicDecision decide_from_cloud(const PointCloud& cloud, const TopicProfile& profile,
                                const DetectorParams& params) {
    TopicDecision decision;
    decision.galaxy = detect_galaxy(cloud, params);
    if (!decision.galaxy) return decision;

    const std::string& prefix = decision.galaxy->prefix;
    std::optional<std::string> matched;
    for (const auto& code : profile.codes) {
        bool related = code.rfind(prefix, 0) == 0 || prefix.rfind(code, 0) == 0;
        if (!related) continue;
        // longest profile code wins; profile.codes iterates in ascending
        // order, so on equal length the smaller code is kept
        if (!matched || code.size() > matched->size()) matched = code;
    }
    if (matched) {
        decision.on_topic = true;
        decision.matched_code = matched;
    }
    return decision;
}

TopicDecision classify_link(const LinkContext& ctx, const Taxonomy& taxonomy,
                            const TopicProfile& profile, const DetectorParams& params) {
    return decide_from_cloud(plot_points(ctx, taxonomy, params), profile, params);
}

TopicDecision classify_page(const PageDocument& doc, const Taxonomy& taxonomy,
                            const TopicProfile& profile, const DetectorParams& params) {
    std::vector<ContextToken> tokens;
    tokens.reserve(doc.body_tokens.size() + 8);
    std::size_t pos = 0;
    for (const auto& t : doc.body_tokens) tokens.push_back({pos++, t, false});
    for (const auto& t : tokenize(doc.title)) tokens.push_back({pos++, t, true});
    return decide_from_cloud(plot_tokens(tokens, taxonomy, params), profile, params);
}

}  // namespace treasure
