#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treasure/config.hpp"
#include "treasure/corpus.hpp"
#include "treasure/crawler.hpp"
#include "treasure/metrics.hpp"
#include "treasure/tgraph.hpp"

namespace {

int run_crawl_cmd(const std::string& config_path) {
    auto config = treasure::CrawlConfig::load(config_path);
    auto summary = treasure::run_crawl(config);
    std::cout << "pages_crawled=" << summary.pages_crawled << " on_topic=" << summary.on_topic
              << " log=" << summary.log_path << "\n";
    return 0;
}

int run_build_tgraph(const std::string& targets_path, const std::string& parents_path, int depth,
                     const std::string& out_path) {
    auto targets = treasure::load_seeds(targets_path);
    treasure::TsvParentProvider provider(parents_path);
    treasure::TGraphParams params;
    params.depth = depth;
    auto graph = treasure::TGraph::build(targets, provider, params);
    graph.save(out_path);
    std::cout << "nodes=" << graph.nodes().size() << " edges=" << graph.edges().size()
              << " out=" << out_path << "\n";
    return 0;
}

int run_gen_corpus(const std::string& spec_path, const std::string& out_dir) {
    auto spec = treasure::CorpusSpec::load(spec_path);
    auto paths = treasure::generate_corpus(spec, out_dir);
    std::cout << "manifest=" << paths.manifest << "\nlabels=" << paths.labels
              << "\nparents=" << paths.parents << "\nseeds=" << paths.seeds
              << "\ntargets=" << paths.targets << "\n";
    return 0;
}

int run_eval(const std::string& log_path, const std::string& labels_path, std::size_t block,
             const std::string& out_csv) {
    auto log = treasure::load_crawl_log(log_path);
    std::unique_ptr<treasure::LabelSet> labels;
    if (!labels_path.empty())
        labels = std::make_unique<treasure::LabelSet>(treasure::LabelSet::load(labels_path));
    auto series = treasure::harvest_series(log, labels.get(), block);
    treasure::write_metrics_csv(series, out_csv);
    std::cout << "blocks=" << series.blocks.size()
              << " cumulative_on_topic=" << series.cumulative.back() << " csv=" << out_csv << "\n";
    if (labels) {
        auto rp = treasure::recall_precision(log, *labels);
        std::cout << "recall="
                  << (rp.recall ? treasure::format_double(*rp.recall) : std::string("undefined"))
                  << " precision="
                  << (rp.precision ? treasure::format_double(*rp.precision)
                                   : std::string("undefined"))
                  << "\n";
    }
    return 0;
}

int run_compare(const std::string& config_path, const std::string& strategies_arg,
                const std::string& labels_path, const std::string& out_csv) {
    auto config = treasure::CrawlConfig::load(config_path);
    std::vector<treasure::Strategy> strategies;
    std::size_t start = 0;
    while (start <= strategies_arg.size()) {
        auto comma = strategies_arg.find(',', start);
        std::string name = strategies_arg.substr(start, comma - start);
        if (!name.empty()) strategies.push_back(treasure::strategy_from(name));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    std::unique_ptr<treasure::LabelSet> labels;
    if (!labels_path.empty())
        labels = std::make_unique<treasure::LabelSet>(treasure::LabelSet::load(labels_path));
    auto result = treasure::compare_strategies(config, strategies, labels.get(), out_csv);
    for (const auto& outcome : result.outcomes) {
        std::cout << treasure::strategy_name(outcome.strategy)
                  << ": pages=" << outcome.total_pages << " on_topic=" << outcome.total_on_topic;
        if (outcome.rp.recall)
            std::cout << " recall=" << treasure::format_double(*outcome.rp.recall);
        if (outcome.rp.precision)
            std::cout << " precision=" << treasure::format_double(*outcome.rp.precision);
        std::cout << "\n";
    }
    std::cout << "csv=" << out_csv << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"focused crawler with taxonomy topic prediction and exemplary-document scoring"};
    app.require_subcommand(1);

    std::string config_path, targets_path, parents_path, out_path, spec_path, out_dir;
    std::string log_path, labels_path, out_csv, strategies = "treasure,bfs";
    int depth = 3;
    std::size_t block = 1000;

    auto* crawl = app.add_subcommand("crawl", "run a crawl from a config file");
    crawl->add_option("--config", config_path, "crawl config file")->required();

    auto* build = app.add_subcommand("build-tgraph", "build the exemplary-document graph");
    build->add_option("--targets", targets_path, "target URLs, one per line")->required();
    build->add_option("--parents", parents_path, "parent map TSV")->required();
    build->add_option("--depth", depth, "levels above the targets");
    build->add_option("--out", out_path, "output JSON path")->required();

    auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic labeled corpus");
    gen->add_option("--spec", spec_path, "corpus spec file")->required();
    gen->add_option("--out", out_dir, "output directory")->required();

    auto* eval = app.add_subcommand("eval", "per-block harvest metrics over a crawl log");
    eval->add_option("--log", log_path, "crawl log (JSON lines)")->required();
    eval->add_option("--labels", labels_path, "ground-truth labels TSV");
    eval->add_option("--block", block, "pages per block");
    eval->add_option("--out", out_csv, "output CSV path")->required();

    auto* compare = app.add_subcommand("compare", "run strategies on one corpus side by side");
    compare->add_option("--config", config_path, "crawl config file")->required();
    compare->add_option("--strategies", strategies, "comma list: treasure,bfs");
    compare->add_option("--labels", labels_path, "ground-truth labels TSV");
    compare->add_option("--out", out_csv, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors -> 1
    }

    try {
        if (crawl->parsed()) return run_crawl_cmd(config_path);
        if (build->parsed()) return run_build_tgraph(targets_path, parents_path, depth, out_path);
        if (gen->parsed()) return run_gen_corpus(spec_path, out_dir);
        if (eval->parsed()) return run_eval(log_path, labels_path, block, out_csv);
        if (compare->parsed()) return run_compare(config_path, strategies, labels_path, out_csv);
    } catch (const treasure::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
