#include <doctest.h>

#include <algorithm>
#include <random>

#include "treasure/frontier.hpp"

using namespace treasure;

TEST_CASE("dequeue returns the maximal priority") {
    Frontier frontier;
    CHECK(frontier.enqueue("a", 0.5));
    CHECK(frontier.enqueue("b", 0.9));
    auto item = frontier.dequeue();
    REQUIRE(item.has_value());
    CHECK(item->url == "b");
    CHECK(frontier.dequeue()->url == "a");
    CHECK_FALSE(frontier.dequeue().has_value());
}

TEST_CASE("equal priorities dequeue first-in-first-out") {
    Frontier frontier;
    frontier.enqueue("s1", 1.0);
    frontier.enqueue("s2", 1.0);
    frontier.enqueue("s3", 1.0);
    CHECK(frontier.dequeue()->url == "s1");
    CHECK(frontier.dequeue()->url == "s2");
    CHECK(frontier.dequeue()->url == "s3");
}

TEST_CASE("already-seen urls are rejected even after dequeue") {
    Frontier frontier;
    CHECK(frontier.enqueue("u", 0.5));
    CHECK_FALSE(frontier.enqueue("u", 0.9));
    frontier.dequeue();
    CHECK_FALSE(frontier.enqueue("u", 0.9));
    CHECK(frontier.insert_count() == 1);
}

TEST_CASE("priority contract is enforced") {
    Frontier frontier;
    CHECK_THROWS_AS(frontier.enqueue("a", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(frontier.enqueue("b", -0.1), std::invalid_argument);
    CHECK_THROWS_AS(frontier.enqueue("c", 1.0001), std::invalid_argument);
    CHECK(frontier.enqueue("d", 1.0));
}

TEST_CASE("the 100th insertion triggers aging") {
    Frontier frontier;  // defaults: factor 0.05, interval 100
    frontier.enqueue("watched", 0.50);
    frontier.enqueue("near-top", 0.97);
    for (int i = 0; i < 97; ++i)
        frontier.enqueue("u" + std::to_string(i), 0.30);
    // 99 insertions so far; the 100th ages every queued item by +0.05 where
    // the result stays below 1
    frontier.enqueue("last", 0.40);

    std::vector<FrontierItem> drained;
    while (auto item = frontier.dequeue()) drained.push_back(*item);
    auto find = [&](const std::string& url) {
        return *std::find_if(drained.begin(), drained.end(),
                             [&](const FrontierItem& item) { return item.url == url; });
    };
    CHECK(find("watched").priority == doctest::Approx(0.55).epsilon(1e-12));
    CHECK(find("near-top").priority == doctest::Approx(0.97).epsilon(1e-12));  // 0.97+0.05 >= 1
    CHECK(find("last").priority == doctest::Approx(0.45).epsilon(1e-12));      // the trigger ages too
    CHECK(find("u0").priority == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("aging never pushes an item to 1.0") {
    Frontier frontier(0.05, 10);
    frontier.enqueue("hot", 0.96);
    for (int round = 0; round < 300; ++round)
        frontier.enqueue("u" + std::to_string(round), 0.5);
    // drain and assert the bound; nothing but the 1.0-seeded items may reach 1
    while (auto item = frontier.dequeue()) CHECK(item->priority < 1.0);
}

namespace {

// reference model: linear scan over a plain vector
struct ModelItem {
    std::string url;
    double priority;
    std::uint64_t seq;
};

struct Model {
    std::vector<ModelItem> items;
    std::vector<std::string> seen;
    std::uint64_t next_seq = 0;
    std::uint64_t inserts = 0;

    bool enqueue(const std::string& url, double priority) {
        if (std::find(seen.begin(), seen.end(), url) != seen.end()) return false;
        seen.push_back(url);
        items.push_back({url, priority, next_seq++});
        if (++inserts % 100 == 0)
            for (auto& item : items)
                if (item.priority + 0.05 < 1.0) item.priority += 0.05;
        return true;
    }

    std::optional<ModelItem> dequeue() {
        if (items.empty()) return std::nullopt;
        std::size_t best = 0;
        for (std::size_t i = 1; i < items.size(); ++i) {
            if (items[i].priority > items[best].priority ||
                (items[i].priority == items[best].priority && items[i].seq < items[best].seq))
                best = i;
        }
        ModelItem out = items[best];
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(best));
        return out;
    }
};

}  // namespace

TEST_CASE("frontier matches the reference model on random operation sequences") {
    std::mt19937 rng(2024);
    for (int round = 0; round < 300; ++round) {
        Frontier frontier;
        Model model;
        int ops = 1 + static_cast<int>(rng() % 60);
        for (int op = 0; op < ops; ++op) {
            if (rng() % 3 != 0) {
                std::string url = "u" + std::to_string(rng() % 40);
                double priority = (1 + rng() % 100) / 100.0;
                CHECK(frontier.enqueue(url, priority) == model.enqueue(url, priority));
            } else {
                auto got = frontier.dequeue();
                auto want = model.dequeue();
                REQUIRE(got.has_value() == want.has_value());
                if (got) {
                    CHECK(got->url == want->url);
                    CHECK(got->priority == want->priority);
                }
            }
        }
    }
}
