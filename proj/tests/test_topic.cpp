#include <doctest.h>

#include <random>

#include "support/galaxy_oracle.hpp"
#include "support/temp_dir.hpp"
#include "treasure/topic.hpp"

using namespace treasure;

namespace {

Taxonomy test_taxonomy() {
    testsupport::TempDir dir("topic");
    return Taxonomy::load(dir.write("tax.tsv",
                                    "420\tEnglish\tenglish\n"
                                    "425\tEnglish grammar\tenglish grammar\n"
                                    "428\tStandard English usage\tusage\n"
                                    "415\tGrammar\tgrammar\n"
                                    "391\tCustoms\tcostume\n"
                                    "155.95\tClothing psychology\tclothing\n"
                                    "391.1\tClothing customs\tclothing2\n"
                                    "746.92\tFashion design\tclothing\n"
                                    "796\tSports\tsports\n"));
}

Taxonomy clothing_taxonomy() {
    testsupport::TempDir dir("clothing");
    return Taxonomy::load(dir.write("tax.tsv",
                                    "155.95\tClothing psychology\tclothing\n"
                                    "391\tCustoms of costume\tclothing\n"
                                    "746.92\tFashion design\tclothing\n"));
}

LinkContext context_of(std::initializer_list<std::pair<const char*, bool>> tokens) {
    LinkContext ctx;
    std::size_t pos = 0;
    for (const auto& [text, anchor] : tokens) ctx.tokens.push_back({pos++, text, anchor});
    return ctx;
}

PlotPoint point(const char* code, bool anchor, std::size_t full_len = 3) {
    return PlotPoint{0, code, full_len, anchor};
}

}  // namespace

TEST_CASE("plot_points weights anchors by the impact factor") {
    Taxonomy tax = test_taxonomy();
    DetectorParams params;
    auto cloud = plot_points(context_of({{"english", true}}), tax, params);
    REQUIRE(cloud.points.size() == 1);
    CHECK(cloud.points[0].code == "420");
    CHECK(cloud.points[0].is_anchor);
    CHECK(cloud.points[0].full_len == 3);
    CHECK(cloud.total_weight == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("plot_points emits one point per code") {
    Taxonomy tax = clothing_taxonomy();
    DetectorParams params;
    auto cloud = plot_points(context_of({{"clothing", false}}), tax, params);
    REQUIRE(cloud.points.size() == 3);
    std::vector<std::string> codes;
    for (const auto& p : cloud.points) {
        codes.push_back(p.code);
        CHECK(point_weight(p, params) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(codes == std::vector<std::string>{"155", "391", "746"});
    CHECK(cloud.total_weight == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("empty context gives an empty cloud") {
    Taxonomy tax = test_taxonomy();
    auto cloud = plot_points(LinkContext{}, tax, {});
    CHECK(cloud.points.empty());
    CHECK(cloud.total_weight == 0.0);
}

TEST_CASE("short codes carry reduced length weight") {
    DetectorParams params;
    CHECK(point_weight(point("42", false, 2), params) == doctest::Approx(2.0 / 3.0));
    CHECK(point_weight(point("4", true, 1), params) == doctest::Approx(1.4 / 3.0));
}

TEST_CASE("galaxy detection matches the worked example") {
    DetectorParams params;
    PointCloud cloud;
    cloud.points = {point("420", true), point("420", false), point("425", false),
                    point("391", false)};
    for (const auto& p : cloud.points) cloud.total_weight += point_weight(p, params);

    auto galaxy = detect_galaxy(cloud, params);
    REQUIRE(galaxy.has_value());
    CHECK(galaxy->prefix == "420");
    CHECK(galaxy->score == doctest::Approx(2.4).epsilon(1e-12));
    CHECK(galaxy->support == 2);
    CHECK(galaxy->anchor_support == 1);

    auto reference = oracle::detect_galaxy(cloud, params);
    REQUIRE(reference.has_value());
    CHECK(reference->prefix == "420");
    CHECK(reference->score == galaxy->score);
}

TEST_CASE("galaxy of an empty cloud is none") {
    CHECK_FALSE(detect_galaxy(PointCloud{}, {}).has_value());
}

TEST_CASE("single point galaxy") {
    DetectorParams params;
    PointCloud cloud;
    cloud.points = {point("391", false)};
    cloud.total_weight = point_weight(cloud.points[0], params);
    auto galaxy = detect_galaxy(cloud, params);
    REQUIRE(galaxy.has_value());
    CHECK(galaxy->prefix == "391");
    CHECK(galaxy->score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(galaxy->support == 1);
    CHECK(galaxy->anchor_support == 0);
}

TEST_CASE("detect_galaxy equals the enumeration oracle on random clouds") {
    std::mt19937 rng(4242);
    DetectorParams params;
    for (int round = 0; round < 200; ++round) {
        // up to 10 distinct 1-3 digit codes per cloud
        std::vector<std::string> codes;
        std::size_t distinct = 1 + rng() % 10;
        for (std::size_t i = 0; i < distinct; ++i) {
            std::size_t len = 1 + rng() % 3;
            std::string code;
            for (std::size_t d = 0; d < len; ++d) code += static_cast<char>('0' + rng() % 10);
            codes.push_back(code);
        }
        PointCloud cloud;
        std::size_t n = rng() % 50;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& code = codes[rng() % codes.size()];
            cloud.points.push_back({i, code, code.size(), rng() % 2 == 0});
            cloud.total_weight += point_weight(cloud.points.back(), params);
        }
        auto got = detect_galaxy(cloud, params);
        auto want = oracle::detect_galaxy(cloud, params);
        REQUIRE(got.has_value() == want.has_value());
        if (!got) continue;
        CHECK(got->prefix == want->prefix);
        CHECK(got->score == doctest::Approx(want->score).epsilon(1e-12));
        CHECK(got->support == want->support);
        CHECK(got->anchor_support == want->anchor_support);
    }
}

TEST_CASE("oracle-level invariances: weight scaling and anchor monotonicity") {
    std::mt19937 rng(777);
    DetectorParams params;
    for (int round = 0; round < 100; ++round) {
        PointCloud cloud;
        std::size_t n = 1 + rng() % 20;
        for (std::size_t i = 0; i < n; ++i) {
            std::string code;
            std::size_t len = 1 + rng() % 3;
            for (std::size_t d = 0; d < len; ++d) code += static_cast<char>('0' + rng() % 4);
            cloud.points.push_back({i, code, code.size(), rng() % 2 == 0});
        }

        // scaling every weight by c > 0 keeps the argmax prefix: score columns
        // scale uniformly, so compare via an explicitly scaled enumeration.
        // powers of two keep the scaling exact so float ties are preserved
        auto base = oracle::detect_galaxy(cloud, params);
        REQUIRE(base.has_value());
        for (double c : {0.25, 2.0, 8.0}) {
            std::optional<GalaxyResult> best;
            std::set<std::string> candidates;
            for (const auto& p : cloud.points)
                for (std::size_t len = 1; len <= std::min(p.code.size(), params.max_dnumber_length);
                     ++len)
                    candidates.insert(p.code.substr(0, len));
            for (const auto& prefix : candidates) {
                double mass = 0.0;
                int support = 0, anchor = 0;
                for (const auto& p : cloud.points) {
                    if (p.code.rfind(prefix, 0) != 0) continue;
                    mass += c * point_weight(p, params);
                    ++support;
                    if (p.is_anchor) ++anchor;
                }
                GalaxyResult cand{prefix,
                                  mass * static_cast<double>(prefix.size()) /
                                      static_cast<double>(params.max_dnumber_length),
                                  support, anchor};
                bool take = !best || cand.score > best->score ||
                            (cand.score == best->score &&
                             (cand.prefix.size() > best->prefix.size() ||
                              (cand.prefix.size() == best->prefix.size() &&
                               (cand.anchor_support > best->anchor_support ||
                                (cand.anchor_support == best->anchor_support &&
                                 cand.prefix < best->prefix)))));
                if (take) best = cand;
            }
            CHECK(best->prefix == base->prefix);
        }

        // flipping one point to anchor never lowers the score of prefixes containing it
        std::size_t flip = rng() % cloud.points.size();
        if (!cloud.points[flip].is_anchor) {
            PointCloud flipped = cloud;
            flipped.points[flip].is_anchor = true;
            const std::string& code = flipped.points[flip].code;
            for (std::size_t len = 1; len <= code.size(); ++len) {
                std::string prefix = code.substr(0, len);
                auto mass_of = [&](const PointCloud& c2) {
                    double mass = 0.0;
                    for (const auto& p : c2.points)
                        if (p.code.rfind(prefix, 0) == 0) mass += point_weight(p, params);
                    return mass * static_cast<double>(prefix.size()) /
                           static_cast<double>(params.max_dnumber_length);
                };
                CHECK(mass_of(flipped) >= mass_of(cloud));
            }
        }
    }
}

TEST_CASE("classify_link against the profile") {
    Taxonomy tax = test_taxonomy();
    DetectorParams params;
    TopicProfile profile;
    profile.codes = {"400", "403", "410", "415", "420", "425", "428", "820"};

    auto on = classify_link(context_of({{"english", true}, {"english", false}}), tax, profile, params);
    CHECK(on.on_topic);
    REQUIRE(on.galaxy.has_value());
    CHECK(on.galaxy->prefix == "420");
    CHECK(on.matched_code == "420");

    auto off = classify_link(context_of({{"costume", false}, {"costume", false}}), tax, profile,
                             params);
    CHECK_FALSE(off.on_topic);
    REQUIRE(off.galaxy.has_value());
    CHECK(off.galaxy->prefix == "391");
    CHECK_FALSE(off.matched_code.has_value());
}

TEST_CASE("short galaxy prefixes match profile codes by prefix relation") {
    DetectorParams params;
    TopicProfile profile;
    profile.codes = {"420"};
    PointCloud cloud;
    cloud.points = {{0, "42", 2, false}};  // 2-digit code only
    auto decision = decide_from_cloud(cloud, profile, params);
    CHECK(decision.on_topic);
    CHECK(decision.galaxy->prefix == "42");
    CHECK(decision.matched_code == "420");
}

TEST_CASE("longest profile match wins, ties take the smaller code") {
    DetectorParams params;
    TopicProfile profile;
    profile.codes = {"4", "42", "420"};
    PointCloud cloud;
    cloud.points = {{0, "420", 3, false}, {1, "420", 3, false}};
    auto decision = decide_from_cloud(cloud, profile, params);
    CHECK(decision.matched_code == "420");

    TopicProfile tie;
    tie.codes = {"421", "425"};  // both extend galaxy prefix "42"
    PointCloud cloud2;
    cloud2.points = {{0, "42", 2, false}};
    auto decision2 = decide_from_cloud(cloud2, tie, params);
    CHECK(decision2.on_topic);
    CHECK(decision2.matched_code == "421");
}

TEST_CASE("classify_page examples") {
    Taxonomy tax = test_taxonomy();
    DetectorParams params;
    TopicProfile profile;
    profile.codes = {"415", "420", "425", "428"};

    PageDocument on_page;
    on_page.url = "http://x.org/";
    on_page.title = "english usage";
    on_page.body_tokens = {"english", "grammar", "english", "usage", "english", "grammar"};
    auto on = classify_page(on_page, tax, profile, params);
    CHECK(on.on_topic);

    PageDocument empty_page;
    empty_page.url = "http://x.org/";
    empty_page.body_tokens = {"zzz", "qqq"};
    auto none = classify_page(empty_page, tax, profile, params);
    CHECK_FALSE(none.on_topic);
    CHECK_FALSE(none.galaxy.has_value());

    PageDocument sports_page;
    sports_page.url = "http://x.org/";
    sports_page.body_tokens.assign(10, "sports");
    sports_page.body_tokens.push_back("english");
    auto off = classify_page(sports_page, tax, profile, params);
    CHECK_FALSE(off.on_topic);
    REQUIRE(off.galaxy.has_value());
    CHECK(off.galaxy->prefix == "796");
}

TEST_CASE("title tokens act as anchors in page classification") {
    Taxonomy tax = test_taxonomy();
    DetectorParams params;
    TopicProfile profile;
    profile.codes = {"420"};

    // body pulls toward sports 2:1; the title's anchor weighting flips it:
    // S(796) = 2, S(420) = 1 + 2 * 1.4 = 3.8
    PageDocument page;
    page.url = "http://x.org/";
    page.title = "english english";
    page.body_tokens = {"sports", "sports", "english"};
    auto decision = classify_page(page, tax, profile, params);
    CHECK(decision.on_topic);
    CHECK(decision.galaxy->prefix == "420");
}

TEST_CASE("decisions are deterministic") {
    Taxonomy tax = test_taxonomy();
    DetectorParams params;
    TopicProfile profile;
    profile.codes = {"420", "415"};
    auto ctx = context_of({{"english", true}, {"grammar", false}, {"sports", false}});
    auto first = classify_link(ctx, tax, profile, params);
    for (int i = 0; i < 10; ++i) {
        auto again = classify_link(ctx, tax, profile, params);
        CHECK(again.on_topic == first.on_topic);
        REQUIRE(again.galaxy.has_value() == first.galaxy.has_value());
        if (first.galaxy) {
            CHECK(again.galaxy->prefix == first.galaxy->prefix);
            CHECK(again.galaxy->score == first.galaxy->score);
        }
        CHECK(again.matched_code == first.matched_code);
    }
}
