#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nasbo/acquisition.hpp"
#include "nasbo/arch_space.hpp"
#include "nasbo/benchmarks.hpp"
#include "nasbo/encodings.hpp"
#include "nasbo/meta_predictor.hpp"

namespace nasbo {

enum class CandidateGen { Mutation, Random };
enum class GpDistance { AdjacencyHamming, PathHamming };

/// Mixed objective (val_loss - loss_lb) * n_params^exponent; the default
/// loss_lb suits CIFAR-scale validation losses and is configurable per
/// benchmark.
struct DualObjectiveConfig {
    double loss_lb = 4.8;
    double exponent = 0.5;
};

double dual_objective(double val_loss, double n_params, const DualObjectiveConfig& cfg);

/// Scalar the search minimizes; Dual combines the oracle value with the
/// parameter count. evaluate() issues exactly one oracle query.
struct Objective {
    enum class Kind { Validation, Dual };
    Kind kind = Kind::Validation;
    DualObjectiveConfig dual;

    double evaluate(BenchmarkOracle& oracle, const Cell& cell) const;
};

struct SearchConfig {
    SpaceParams space;
    int t0 = 10;           // initial random architectures
    int budget = 150;      // T, total query budget
    int ensemble_size = 5;  // M
    int candidates_per_iter = 100;  // c
    int elites = 10;       // x, top architectures mutated
    int batch_k = 10;      // k, batch per iteration
    AcqContext acquisition{AcqKind::ITS, 0.5, 0.0};
    EncodingSpec encoding{EncodingKind::Path, std::nullopt};
    double mutation_rate = 1.0;
    bool dedup = true;     // drop already-evaluated cells via canonical form
    CandidateGen candidate_gen = CandidateGen::Mutation;
    int random_pool = 1000;  // candidates per iteration for CandidateGen::Random
    PredictorConfig predictor{.loss = Loss::MAPE};
};

struct TrialEntry {
    int index = 0;  // query number, 0-based
    std::string cell_text;
    double observed = 0.0;
    double best_so_far = 0.0;
    double test_error_of_best = 0.0;
    double wall_ms = 0.0;  // informational; excluded from determinism checks
};

struct TrialRecord {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::vector<TrialEntry> entries;

    /// Serialized data content (no wall-clock); equal strings mean equal runs.
    std::string data_fingerprint() const;
};

/// The full BO loop: t0 random cells, then iterate (train ensemble on all
/// observations; generate candidates by mutating the x best cells
/// round-robin; score with the acquisition; evaluate the k best) until the
/// budget is spent.
TrialRecord ensemble_bo_search(BenchmarkOracle& oracle, const Objective& objective,
                               const SearchConfig& cfg, std::uint64_t seed);

TrialRecord random_search(BenchmarkOracle& oracle, const Objective& objective,
                          const SpaceParams& space, int budget, std::uint64_t seed);

/// Aging evolution: P random cells, then sample S uniformly, mutate the best
/// of the sample, evict the oldest.
TrialRecord regularized_evolution(BenchmarkOracle& oracle, const Objective& objective,
                                  const SpaceParams& space, int budget, int population,
                                  int sample_size, std::uint64_t seed);

/// Same loop shape as ensemble_bo_search with a Gaussian-process surrogate:
/// kernel exp(-d/lambda) on the selected Hamming distance, lambda set to the
/// mean pairwise distance each iteration, observation jitter 1e-6 escalated
/// x10 up to 1e-2, UCB acquisition (beta per cfg.acquisition.beta).
TrialRecord gp_bo_search(BenchmarkOracle& oracle, const Objective& objective,
                         const SearchConfig& cfg, GpDistance distance, std::uint64_t seed);

}  // namespace nasbo
