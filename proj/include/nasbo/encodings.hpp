#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nasbo/arch_space.hpp"

namespace nasbo {

/// The enumerated universe of labeled input->output paths for a space: all op
/// sequences of length 0..n_nodes-2, ordered by length then lexicographically.
/// A sequence of length L corresponds to a path with L+1 edges.
struct PathTable {
    std::vector<std::vector<int>> paths;
    SpaceParams space;

    std::size_t size() const { return paths.size(); }
    /// Index of an op sequence; throws if it does not belong to the table.
    std::size_t index_of(const std::vector<int>& seq) const;

  private:
    friend PathTable enumerate_paths(const SpaceParams&, std::size_t);
    std::unordered_map<std::string, std::size_t> index_;
};

enum class EncodingKind { Path, Adjacency, ContinuousAdjacency };

struct EncodingSpec {
    EncodingKind kind = EncodingKind::Path;
    std::optional<std::size_t> truncate_len;  // Path only
};

/// Enumerates all op sequences of length 0..n_nodes-2. Total size is
/// sum_{i=0}^{n_nodes-2} n_ops^i; throws std::length_error beyond `cap`.
PathTable enumerate_paths(const SpaceParams& space, std::size_t cap = 10'000'000);

/// Distinct op sequences of the cell's input->output paths, sorted by length
/// then lexicographically. Computed by dynamic programming in node order.
std::vector<std::vector<int>> cell_paths(const Cell& cell, const SpaceParams& space);

/// Binary path encoding: bit b_p = 1 iff the cell contains path p. Truncation
/// keeps the first truncate_len table entries (shortest paths first).
std::vector<double> encode_path(const Cell& cell, const PathTable& table,
                                std::optional<std::size_t> truncate_len = std::nullopt);

/// Upper-triangular edge bits (row-major) followed by a one-hot op block of
/// size (n_nodes-2)*n_ops.
std::vector<double> encode_adjacency(const Cell& cell, const SpaceParams& space);

/// Edge bits as reals plus one real per intermediate node, (op_index+1)/n_ops.
std::vector<double> encode_continuous_adjacency(const Cell& cell, const SpaceParams& space);

/// Length of the vector `encode` produces for this spec.
std::size_t encoding_length(const EncodingSpec& spec, const PathTable& table);

/// Dispatch on spec.kind; `table` is only consulted for the path encoding.
std::vector<double> encode(const Cell& cell, const EncodingSpec& spec, const PathTable& table);

std::string encoding_kind_name(EncodingKind kind);
EncodingKind encoding_kind_from_name(const std::string& name);

}  // namespace nasbo
