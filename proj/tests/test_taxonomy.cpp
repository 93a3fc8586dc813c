#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/temp_dir.hpp"
#include "treasure/taxonomy.hpp"

using namespace treasure;

namespace {

Taxonomy load_from(const std::string& text) {
    testsupport::TempDir dir("tax");
    return Taxonomy::load(dir.write("tax.tsv", text));
}

std::vector<std::string> toks(std::initializer_list<const char*> words) {
    return {words.begin(), words.end()};
}

}  // namespace

TEST_CASE("taxonomy load builds the term index") {
    Taxonomy tax = load_from("420\tEnglish & Old English\tenglish,old english\n");
    auto hits = tax.lookup_terms(toks({"english"}));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].position == 0);
    CHECK(std::count(hits[0].codes.begin(), hits[0].codes.end(), "420") == 1);
    CHECK(tax.max_phrase_len() == 2);
}

TEST_CASE("taxonomy load rejects degenerate input") {
    CHECK_THROWS_WITH_AS(load_from(""), doctest::Contains("empty taxonomy"), TaxonomyError);
    CHECK_THROWS_WITH_AS(load_from("# only comments\n\n"), doctest::Contains("empty taxonomy"),
                         TaxonomyError);
    CHECK_THROWS_WITH_AS(load_from("420\tno terms column\n"), doctest::Contains(":1:"),
                         TaxonomyError);
    CHECK_THROWS_WITH_AS(load_from("420\tok\tenglish\nbogus\tbad code\tx\n"),
                         doctest::Contains(":2:"), TaxonomyError);
    CHECK_THROWS_AS(load_from("4.2.0\tbad\tx\n"), TaxonomyError);
}

TEST_CASE("multi-code terms keep all codes") {
    Taxonomy tax = load_from(
        "155.95\tClothing psychology\tclothing\n"
        "391\tCustoms of costume\tclothing,costume\n"
        "746.92\tFashion design\tclothing\n");
    auto hits = tax.lookup_terms(toks({"clothing"}));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].codes == std::vector<std::string>{"155.95", "391", "746.92"});
}

TEST_CASE("phrase matches consume their words") {
    Taxonomy tax = load_from(
        "419\tSign languages\tsign languages\n"
        "400\tLanguage\tlanguages\n");
    auto hits = tax.lookup_terms(toks({"sign", "languages"}));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].position == 0);
    CHECK(hits[0].codes == std::vector<std::string>{"419"});

    // without the leading word the single-word entry fires instead
    hits = tax.lookup_terms(toks({"languages"}));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].codes == std::vector<std::string>{"400"});
}

TEST_CASE("lookup of unknown terms is empty") {
    Taxonomy tax = load_from("420\tEnglish\tenglish\n");
    CHECK(tax.lookup_terms(toks({"qwxyz"})).empty());
    CHECK(tax.lookup_terms({}).empty());
}

TEST_CASE("terms are stemmed at load so probes are stem to stem") {
    Taxonomy tax = load_from("415\tGrammar\tgrammars,grammatical\n");
    CHECK(tax.lookup_terms(toks({"grammars"})).size() == 1);
    CHECK(tax.lookup_terms(toks({"grammatical"})).size() == 1);
}

TEST_CASE("duplicate term/code pairs are deduplicated") {
    Taxonomy tax = load_from("420\tEnglish\tenglish,English,  english \n");
    auto hits = tax.lookup_terms(toks({"english"}));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].codes == std::vector<std::string>{"420"});
}

TEST_CASE("truncate_code") {
    CHECK(truncate_code("155.95", 3) == "155");
    CHECK(truncate_code("42", 3) == "42");
    CHECK(truncate_code("746.92", 3) == "746");
    CHECK(truncate_code("746.92", 2) == "74");

    // idempotence
    for (const char* code : {"155.95", "42", "746.92", "4", "123456.7"}) {
        for (std::size_t len : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{5}}) {
            std::string once = truncate_code(code, len);
            CHECK(truncate_code(once, len) == once);
        }
    }
}

TEST_CASE("DNumber parsing and digit counts") {
    CHECK(DNumber::parse("155.95")->digit_count() == 5);
    CHECK(DNumber::parse("420")->truncated(3) == "420");
    CHECK_FALSE(DNumber::parse(""));
    CHECK_FALSE(DNumber::parse("4a2"));
    CHECK_FALSE(DNumber::parse(".42"));
    CHECK_FALSE(DNumber::parse("42."));
    CHECK_FALSE(DNumber::parse("1.2.3"));
}

TEST_CASE("lookup properties over random token streams") {
    Taxonomy tax = load_from(
        "420\tEnglish\tenglish,old english\n"
        "419\tSign languages\tsign languages\n"
        "415\tGrammar\tgrammar\n"
        "796\tSports\tsports\n");
    std::vector<std::string> vocab = {"english", "old", "sign", "languages", "grammar",
                                      "sports",  "zzz", "the",  "word",      "page"};
    std::mt19937 rng(12345);
    for (int round = 0; round < 200; ++round) {
        std::vector<std::string> tokens;
        std::size_t n = rng() % 30;
        for (std::size_t i = 0; i < n; ++i) tokens.push_back(vocab[rng() % vocab.size()]);

        auto hits = tax.lookup_terms(tokens);
        std::size_t prev = 0;
        bool first = true;
        for (const auto& hit : hits) {
            CHECK(hit.position < tokens.size());
            if (!first) CHECK(hit.position > prev);  // phrase words are consumed
            prev = hit.position;
            first = false;
            for (const auto& code : hit.codes) CHECK(tax.has_code(code));
        }

        // removing a token never changes hits that finished well before it
        if (tokens.empty()) continue;
        std::size_t removed = rng() % tokens.size();
        std::vector<std::string> fewer = tokens;
        fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(removed));
        auto fewer_hits = tax.lookup_terms(fewer);
        std::size_t window = tax.max_phrase_len();
        auto stable = [&](const std::vector<TermHit>& all) {
            std::vector<TermHit> out;
            for (const auto& hit : all)
                if (hit.position + window <= removed) out.push_back(hit);
            return out;
        };
        auto a = stable(hits);
        auto b = stable(fewer_hits);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].position == b[i].position);
            CHECK(a[i].codes == b[i].codes);
        }
    }
}

TEST_CASE("topic profile loads truncated codes") {
    testsupport::TempDir dir("profile");
    auto path = dir.write("p.txt", "# comment\n420\n155.95\n");
    TopicProfile profile = TopicProfile::load(path, 3);
    CHECK(profile.codes == std::set<std::string>{"155", "420"});
    CHECK_THROWS_AS(TopicProfile::load(dir.write("empty.txt", "#\n"), 3), TaxonomyError);
    CHECK_THROWS_AS(TopicProfile::load(dir.write("bad.txt", "42x\n"), 3), TaxonomyError);
}
