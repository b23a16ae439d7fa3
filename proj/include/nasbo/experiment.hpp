#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nasbo/benchmarks.hpp"
#include "nasbo/search.hpp"

namespace nasbo {

struct BenchmarkSpec {
    enum class Kind { Synthetic, Tabular };
    Kind kind = Kind::Synthetic;
    std::uint64_t seed = 0;  // synthetic truth seed
    std::string path;        // tabular file
    QueryMode mode = QueryMode::MeanValidation;
};

struct ExperimentConfig {
    std::vector<std::string> algorithms;  // ensemble_bo | random | evolution | gp_bo
    SearchConfig search;
    BenchmarkSpec benchmark;
    Objective objective;
    int evolution_population = 30;
    int evolution_sample_size = 10;
    GpDistance gp_distance = GpDistance::AdjacencyHamming;
    int trials = 1;
    std::uint64_t base_seed = 0;
    std::string output_dir = "results";
    int workers = 1;
};

/// Parses the flat key-value format (see README); throws std::runtime_error
/// naming the offending key and line on unknown keys, type mismatches, or a
/// missing benchmark.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Renders the fully-resolved configuration (all defaults materialized);
/// written to the output directory for provenance.
std::string render_config(const ExperimentConfig& cfg, const std::string& oracle_version);

BenchmarkOracle make_oracle(const ExperimentConfig& cfg);

/// Runs one (algorithm, seed) pair against a fresh oracle instance.
TrialRecord run_one(const ExperimentConfig& cfg, const std::string& algorithm,
                    const BenchmarkOracle& base_oracle, std::uint64_t seed);

/// Runs each (algorithm, trial) with seed base_seed + trial, writes one CSV
/// per algorithm plus summary.csv and the resolved config. Returns 0 on
/// success; failures print a message and return nonzero.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace nasbo
