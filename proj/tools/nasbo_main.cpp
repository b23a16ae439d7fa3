#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nasbo/arch_space.hpp"
#include "nasbo/benchmarks.hpp"
#include "nasbo/encodings.hpp"
#include "nasbo/experiment.hpp"
#include "nasbo/theory_stats.hpp"

namespace {

int cmd_stats(const std::string& model, int nodes, int ops, double k, int max_edges,
              std::uint64_t trials, std::uint64_t seed, bool no_rejection,
              const std::string& out_path) {
    nasbo::Rng rng(seed);
    nasbo::McOptions options;
    options.condition_on_connectivity = !no_rejection;
    nasbo::PathLengthStats stats;
    if (model == "random_spec") {
        nasbo::SpaceParams space;
        space.n_nodes = nodes;
        space.n_ops = ops;
        space.max_edges = max_edges;
        stats = nasbo::mc_path_probs(space, trials, rng, options);
    } else if (model == "gnkr") {
        nasbo::RandomGraphParams params;
        params.n = nodes;
        params.r = ops;
        params.k = k;
        stats = nasbo::mc_path_probs(params, trials, rng, options);
    } else {
        std::cerr << "error: --model must be random_spec or gnkr\n";
        return 1;
    }
    const std::string csv = nasbo::path_stats_csv(stats);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 1;
        }
        out << csv;
    }
    std::cerr << "# trials " << stats.trials << ", acceptance rate " << stats.acceptance_rate
              << "\n";
    return 0;
}

int cmd_encode(const std::string& cell_text, const std::string& encoding, int nodes, int ops,
               int max_edges, std::optional<std::size_t> truncate) {
    nasbo::SpaceParams space;
    space.n_nodes = nodes;
    space.n_ops = ops;
    space.max_edges = max_edges;
    const nasbo::Cell cell = nasbo::cell_from_text(cell_text);
    if (const auto violations = nasbo::validate(cell, space); !violations.empty()) {
        std::cerr << "error: invalid cell:";
        for (const auto& v : violations) {
            std::cerr << " [" << v << "]";
        }
        std::cerr << "\n";
        return 1;
    }
    nasbo::EncodingSpec spec;
    spec.kind = nasbo::encoding_kind_from_name(encoding);
    spec.truncate_len = truncate;
    const auto table = nasbo::enumerate_paths(space);
    const auto vec = nasbo::encode(cell, spec, table);
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (i > 0) {
            std::cout << ",";
        }
        // binary encodings print as 0/1, the continuous one as reals
        if (vec[i] == static_cast<long long>(vec[i])) {
            std::cout << static_cast<long long>(vec[i]);
        } else {
            std::cout << vec[i];
        }
    }
    std::cout << "\n";
    return 0;
}

int cmd_validate_data(const std::string& path) {
    try {
        const auto oracle = nasbo::BenchmarkOracle::load_tabular(path);
        std::cout << "ok: " << oracle.table_size() << " records\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAG-cell architecture search over surrogate benchmarks"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "experiment config file")->required();

    std::string model = "random_spec";
    int nodes = 7;
    int ops = 3;
    double k = 9.0;
    int max_edges = 9;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    bool no_rejection = false;
    std::string out_path;
    auto* stats = app.add_subcommand("stats", "Monte Carlo path-length statistics");
    stats->add_option("--model", model, "random_spec or gnkr")->required();
    stats->add_option("--trials", trials, "number of accepted samples");
    stats->add_option("--nodes", nodes, "node count");
    stats->add_option("--ops", ops, "operation count");
    stats->add_option("--k", k, "expected edges (gnkr)");
    stats->add_option("--max-edges", max_edges, "edge budget (random_spec)");
    stats->add_option("--seed", seed, "random seed");
    stats->add_flag("--no-rejection", no_rejection, "sample the pre-rejection model");
    stats->add_option("--out", out_path, "write CSV here instead of stdout");

    std::string cell_text;
    std::string encoding = "path";
    std::optional<std::size_t> truncate;
    auto* encode = app.add_subcommand("encode", "print a cell's feature vector as CSV");
    encode->add_option("--cell", cell_text, "cell text form, e.g. ops=[0,1];edges=[(0,1),(1,3)]")
        ->required();
    encode->add_option("--encoding", encoding, "path, adjacency, or continuous_adjacency");
    encode->add_option("--truncate", truncate, "path-encoding truncation length");
    encode->add_option("--nodes", nodes, "node count");
    encode->add_option("--ops", ops, "operation count");
    encode->add_option("--max-edges", max_edges, "edge budget");

    std::string data_path;
    auto* validate = app.add_subcommand("validate-data", "check a tabular benchmark file");
    validate->add_option("file", data_path, "line-delimited benchmark records")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return nasbo::run_experiment(nasbo::parse_config_file(config_path));
        }
        if (stats->parsed()) {
            return cmd_stats(model, nodes, ops, k, max_edges, trials, seed, no_rejection, out_path);
        }
        if (encode->parsed()) {
            return cmd_encode(cell_text, encoding, nodes, ops, max_edges, truncate);
        }
        if (validate->parsed()) {
            return cmd_validate_data(data_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
