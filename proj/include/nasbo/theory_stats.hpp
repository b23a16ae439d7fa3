#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "nasbo/arch_space.hpp"
#include "nasbo/rng.hpp"

namespace nasbo {

/// Monte Carlo path statistics for one edge-length row: the probability that
/// the designated labeled path (ops all index 0) of that length is present,
/// and expected path counts.
struct PathLengthRow {
    int length = 0;                    // edges on the path
    double probability = 0.0;          // designated labeled path present
    std::uint64_t total_paths = 0;     // labeled paths of this length, r^(length-1)
    double expected_labeled = 0.0;     // mean # distinct labeled paths present
    double expected_node_paths = 0.0;  // mean # node paths (unlabeled), any ops
    double node_paths_se = 0.0;        // standard error of that mean
};

struct PathLengthStats {
    std::vector<PathLengthRow> rows;
    std::uint64_t trials = 0;
    double acceptance_rate = 1.0;
};

struct McOptions {
    /// Step-4 toggle: false samples the pre-rejection model G'.
    bool condition_on_connectivity = true;
};

/// Total number of labeled paths: sum_{i=0}^{n_intermediate} r^i.
/// Throws std::overflow_error when the sum leaves the 64-bit range.
std::uint64_t num_paths(int n_intermediate, int r);

/// Expected number of length-l (edges) input->output node paths in the
/// pre-rejection model G': C(n-2, l-1) * (2k/(n(n-1)))^l.
double expected_paths(int n, double k, int l);

/// Sum of expected_paths over l from ceil(log_r n) to n-1.
double tail_mass(int n, double k, int r);

/// Monte Carlo path-length statistics under either random-graph model.
PathLengthStats mc_path_probs(const SpaceParams& model, std::uint64_t trials, Rng& rng,
                              const McOptions& options = {});
PathLengthStats mc_path_probs(const RandomGraphParams& model, std::uint64_t trials, Rng& rng,
                              const McOptions& options = {});

/// CSV with columns path_length, probability, total_num_paths,
/// expected_num_paths (header row included, LF line endings).
std::string path_stats_csv(const PathLengthStats& stats);

}  // namespace nasbo
