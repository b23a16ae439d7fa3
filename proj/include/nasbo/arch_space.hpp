#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nasbo/rng.hpp"

namespace nasbo {

/// Parameters of a DAG-cell search space. Node 0 is the input and node
/// n_nodes-1 the output; the n_nodes-2 intermediate nodes carry operations.
struct SpaceParams {
    int n_nodes = 7;
    int n_ops = 3;
    int max_edges = 9;
    std::vector<std::string> op_names = {"conv1x1", "conv3x3", "pool3x3"};

    int n_intermediate() const { return n_nodes - 2; }
    int n_edge_slots() const { return n_nodes * (n_nodes - 1) / 2; }
};

using Edge = std::pair<int, int>;

/// A labeled DAG architecture. Edges are directed (i, j) with i < j, kept
/// sorted; ops[k] is the operation index of intermediate node k+1.
struct Cell {
    std::vector<int> ops;
    std::vector<Edge> edges;

    bool operator==(const Cell&) const = default;
};

enum class RandomGraphModel { RandomSpec, Gnkr };

/// Parameters of the analytical random-graph model: edge probability
/// 2k/(n(n-1)) (Gnkr) or 1/2 with a max-edge cap (RandomSpec).
struct RandomGraphParams {
    int n = 7;
    double k = 9.0;
    int r = 3;
    RandomGraphModel model = RandomGraphModel::Gnkr;
};

/// True iff the cell's DAG contains a directed path node 0 -> node n-1.
bool has_input_output_path(const Cell& cell, int n_nodes);

/// Rejection sampler: each edge slot filled independently with probability
/// 1/2, ops uniform; resampled until the edge budget holds and an
/// input->output path exists. Throws after 10^6 failed attempts.
Cell random_spec(const SpaceParams& params, Rng& rng);

/// Definition-style sampler: edge probability 2k/(n(n-1)) (clipped to 1),
/// rejection only on a missing input->output path. With
/// reject_disconnected=false returns the raw draw (the pre-rejection model).
Cell sample_gnkr(const RandomGraphParams& p, Rng& rng, bool reject_disconnected = true);

/// Each edge slot flips and each op re-draws independently with probability
/// rate / (#edge slots + #ops); the result is resampled until valid. If no
/// valid distinct draw is found the original cell is returned.
Cell mutate(const Cell& cell, const SpaceParams& params, double rate, Rng& rng);

/// Violated invariants by name; empty means the cell is valid.
std::vector<std::string> validate(const Cell& cell, const SpaceParams& params);

bool is_valid(const Cell& cell, const SpaceParams& params);

/// Canonical serialized form, minimal over all permutations of intermediate
/// nodes. Two cells related by such a permutation share it.
std::string canonical_form(const Cell& cell, const SpaceParams& params);

/// 64-bit hash of canonical_form.
std::uint64_t canonical_hash(const Cell& cell, const SpaceParams& params);

/// Canonical text form `ops=[a,b,...];edges=[(i,j),...]`, edges sorted
/// lexicographically.
std::string cell_to_text(const Cell& cell);

/// Parses the text form; throws std::invalid_argument with a description on
/// malformed input.
Cell cell_from_text(const std::string& text);

}  // namespace nasbo
