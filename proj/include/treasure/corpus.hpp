#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace treasure {

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape of a synthetic labeled corpus: on-topic clusters joined only by
// off-topic bridge chains, plus off-topic filler hanging off cluster and
// bridge pages.
struct CorpusSpec {
    std::size_t total_pages = 0;
    std::size_t cluster_count = 0;
    std::size_t cluster_size = 0;
    std::size_t bridge_length = 0;
    std::vector<std::string> on_topic_terms;
    std::vector<std::string> off_topic_terms;
    std::uint64_t rng_seed = 1;

    // Flat `key = value`; the term pools are comma-separated lists.
    static CorpusSpec load(const std::string& path);

    void validate() const;  // throws before anything is written
};

struct CorpusPaths {
    std::string manifest;  // JSON-lines {"url","path","status"}
    std::string labels;    // url \t 0|1
    std::string parents;   // child \t parent \t anchor \t surrounding \t title \t body_path
    std::string seeds;     // first cluster's entry page
    std::string targets;   // four spread cluster-0 pages, for tgraph builds
};

// Deterministic for a fixed rng_seed: two runs produce byte-identical files.
CorpusPaths generate_corpus(const CorpusSpec& spec, const std::string& out_dir);

}  // namespace treasure
