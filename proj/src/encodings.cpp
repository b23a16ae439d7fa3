#include "nasbo/encodings.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nasbo {

namespace {

std::string seq_key(const std::vector<int>& seq) {
    std::string key;
    key.reserve(seq.size());
    for (int op : seq) {
        key.push_back(static_cast<char>(op));
    }
    return key;
}

}  // namespace

std::size_t PathTable::index_of(const std::vector<int>& seq) const {
    const auto it = index_.find(seq_key(seq));
    if (it == index_.end()) {
        throw std::out_of_range("PathTable: op sequence not in table");
    }
    return it->second;
}

PathTable enumerate_paths(const SpaceParams& space, std::size_t cap) {
    PathTable table;
    table.space = space;
    const int m = space.n_intermediate();
    const std::size_t r = static_cast<std::size_t>(space.n_ops);

    std::size_t total = 0;
    std::size_t pow = 1;
    for (int len = 0; len <= m; ++len) {
        if (total > cap - pow) {
            throw std::length_error("enumerate_paths: path universe exceeds cap");
        }
        total += pow;
        if (len < m && pow > cap / r) {
            throw std::length_error("enumerate_paths: path universe exceeds cap");
        }
        pow *= r;
    }

    table.paths.reserve(total);
    for (int len = 0; len <= m; ++len) {
        std::vector<int> seq(len, 0);
        while (true) {
            table.index_.emplace(seq_key(seq), table.paths.size());
            table.paths.push_back(seq);
            // odometer increment for lexicographic order
            int pos = len - 1;
            while (pos >= 0 && seq[pos] == space.n_ops - 1) {
                seq[pos] = 0;
                --pos;
            }
            if (pos < 0) {
                break;
            }
            ++seq[pos];
        }
    }
    return table;
}

std::vector<std::vector<int>> cell_paths(const Cell& cell, const SpaceParams& space) {
    const int n = space.n_nodes;
    auto edges = cell.edges;
    std::sort(edges.begin(), edges.end());  // source-major order is topological
    std::vector<std::vector<std::vector<int>>> reach(n);
    reach[0] = {{}};
    for (const auto& [i, j] : edges) {
        if (reach[i].empty()) {
            continue;
        }
        for (const auto& seq : reach[i]) {
            auto extended = seq;
            if (j != n - 1) {
                extended.push_back(cell.ops[j - 1]);
            }
            reach[j].push_back(std::move(extended));
        }
        // dedupe as we go; memoized per-node sets keep the DP exact
        auto& bucket = reach[j];
        std::sort(bucket.begin(), bucket.end());
        bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
    }
    auto paths = reach[n - 1];
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        return a < b;
    });
    return paths;
}

std::vector<double> encode_path(const Cell& cell, const PathTable& table,
                                std::optional<std::size_t> truncate_len) {
    if (truncate_len && *truncate_len > table.size()) {
        throw std::invalid_argument("encode_path: truncate_len exceeds path universe");
    }
    const std::size_t len = truncate_len.value_or(table.size());
    std::vector<double> vec(len, 0.0);
    for (const auto& seq : cell_paths(cell, table.space)) {
        const std::size_t idx = table.index_of(seq);
        if (idx < len) {
            vec[idx] = 1.0;
        }
    }
    return vec;
}

std::vector<double> encode_adjacency(const Cell& cell, const SpaceParams& space) {
    const int n = space.n_nodes;
    std::vector<double> vec(static_cast<std::size_t>(space.n_edge_slots()) +
                                static_cast<std::size_t>(space.n_intermediate()) * space.n_ops,
                            0.0);
    for (const auto& [i, j] : cell.edges) {
        const int slot = i * n - i * (i + 1) / 2 + (j - i - 1);
        vec[slot] = 1.0;
    }
    const std::size_t op_base = static_cast<std::size_t>(space.n_edge_slots());
    for (int k = 0; k < space.n_intermediate(); ++k) {
        vec[op_base + static_cast<std::size_t>(k) * space.n_ops + cell.ops[k]] = 1.0;
    }
    return vec;
}

std::vector<double> encode_continuous_adjacency(const Cell& cell, const SpaceParams& space) {
    const int n = space.n_nodes;
    std::vector<double> vec(static_cast<std::size_t>(space.n_edge_slots()) +
                                static_cast<std::size_t>(space.n_intermediate()),
                            0.0);
    for (const auto& [i, j] : cell.edges) {
        const int slot = i * n - i * (i + 1) / 2 + (j - i - 1);
        vec[slot] = 1.0;
    }
    const std::size_t op_base = static_cast<std::size_t>(space.n_edge_slots());
    for (int k = 0; k < space.n_intermediate(); ++k) {
        // (idx+1)/r keeps op features nonzero and invertible
        vec[op_base + k] = static_cast<double>(cell.ops[k] + 1) / space.n_ops;
    }
    return vec;
}

std::size_t encoding_length(const EncodingSpec& spec, const PathTable& table) {
    const SpaceParams& space = table.space;
    switch (spec.kind) {
        case EncodingKind::Path:
            return spec.truncate_len.value_or(table.size());
        case EncodingKind::Adjacency:
            return static_cast<std::size_t>(space.n_edge_slots()) +
                   static_cast<std::size_t>(space.n_intermediate()) * space.n_ops;
        case EncodingKind::ContinuousAdjacency:
            return static_cast<std::size_t>(space.n_edge_slots()) +
                   static_cast<std::size_t>(space.n_intermediate());
    }
    throw std::logic_error("encoding_length: unknown kind");
}

std::vector<double> encode(const Cell& cell, const EncodingSpec& spec, const PathTable& table) {
    switch (spec.kind) {
        case EncodingKind::Path:
            return encode_path(cell, table, spec.truncate_len);
        case EncodingKind::Adjacency:
            return encode_adjacency(cell, table.space);
        case EncodingKind::ContinuousAdjacency:
            return encode_continuous_adjacency(cell, table.space);
    }
    throw std::logic_error("encode: unknown kind");
}

std::string encoding_kind_name(EncodingKind kind) {
    switch (kind) {
        case EncodingKind::Path:
            return "path";
        case EncodingKind::Adjacency:
            return "adjacency";
        case EncodingKind::ContinuousAdjacency:
            return "continuous_adjacency";
    }
    throw std::logic_error("encoding_kind_name: unknown kind");
}

EncodingKind encoding_kind_from_name(const std::string& name) {
    if (name == "path") {
        return EncodingKind::Path;
    }
    if (name == "adjacency") {
        return EncodingKind::Adjacency;
    }
    if (name == "continuous_adjacency") {
        return EncodingKind::ContinuousAdjacency;
    }
    throw std::invalid_argument("unknown encoding kind: " + name);
}

}  // namespace nasbo
