#include "nasbo/arch_space.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nasbo {

namespace {

constexpr int kMaxSampleAttempts = 1'000'000;
constexpr int kMaxMutateAttempts = 1'000;

std::vector<std::vector<int>> adjacency_list(const Cell& cell, int n_nodes) {
    std::vector<std::vector<int>> adj(n_nodes);
    for (const auto& [i, j] : cell.edges) {
        adj[i].push_back(j);
    }
    return adj;
}

Cell draw_cell(int n_nodes, int n_ops, double edge_prob, Rng& rng) {
    Cell cell;
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = i + 1; j < n_nodes; ++j) {
            if (rng.bernoulli(edge_prob)) {
                cell.edges.emplace_back(i, j);
            }
        }
    }
    cell.ops.resize(n_nodes - 2);
    for (auto& op : cell.ops) {
        op = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_ops)));
    }
    return cell;
}

}  // namespace

bool has_input_output_path(const Cell& cell, int n_nodes) {
    if (n_nodes < 2) {
        return false;
    }
    const auto adj = adjacency_list(cell, n_nodes);
    std::vector<char> seen(n_nodes, 0);
    seen[0] = 1;
    std::vector<int> stack = {0};
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
        }
    }
    return seen[n_nodes - 1] != 0;
}

Cell random_spec(const SpaceParams& params, Rng& rng) {
    for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
        Cell cell = draw_cell(params.n_nodes, params.n_ops, 0.5, rng);
        if (static_cast<int>(cell.edges.size()) <= params.max_edges &&
            has_input_output_path(cell, params.n_nodes)) {
            return cell;
        }
    }
    throw std::runtime_error("random_spec: no valid cell found within 10^6 attempts; "
                             "check the space configuration");
}

Cell sample_gnkr(const RandomGraphParams& p, Rng& rng, bool reject_disconnected) {
    const double slots = static_cast<double>(p.n) * (p.n - 1) / 2.0;
    const double prob = std::min(1.0, p.k / slots);
    for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
        Cell cell = draw_cell(p.n, p.r, prob, rng);
        if (!reject_disconnected || has_input_output_path(cell, p.n)) {
            return cell;
        }
    }
    throw std::runtime_error("sample_gnkr: no connected graph found within 10^6 attempts");
}

Cell mutate(const Cell& cell, const SpaceParams& params, double rate, Rng& rng) {
    const int slots = params.n_edge_slots();
    const int n_inter = params.n_intermediate();
    const double per_entity = rate / static_cast<double>(slots + n_inter);

    for (int attempt = 0; attempt < kMaxMutateAttempts; ++attempt) {
        Cell out;
        out.ops = cell.ops;
        std::vector<char> present(slots, 0);
        auto slot_index = [&](int i, int j) {
            // row-major over the upper triangle
            return i * params.n_nodes - i * (i + 1) / 2 + (j - i - 1);
        };
        for (const auto& [i, j] : cell.edges) {
            present[slot_index(i, j)] = 1;
        }
        int s = 0;
        for (int i = 0; i < params.n_nodes; ++i) {
            for (int j = i + 1; j < params.n_nodes; ++j, ++s) {
                const bool flip = rng.bernoulli(per_entity);
                if (present[s] != flip) {  // present XOR flip
                    out.edges.emplace_back(i, j);
                }
            }
        }
        for (int k = 0; k < n_inter; ++k) {
            if (rng.bernoulli(per_entity) && params.n_ops > 1) {
                const int offset =
                    1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(params.n_ops - 1)));
                out.ops[k] = (out.ops[k] + offset) % params.n_ops;
            }
        }
        if (static_cast<int>(out.edges.size()) <= params.max_edges &&
            has_input_output_path(out, params.n_nodes)) {
            return out;
        }
    }
    return cell;
}

std::vector<std::string> validate(const Cell& cell, const SpaceParams& params) {
    std::vector<std::string> violations;
    if (static_cast<int>(cell.ops.size()) != params.n_intermediate()) {
        violations.push_back("ops length mismatch");
    }
    for (int op : cell.ops) {
        if (op < 0 || op >= params.n_ops) {
            violations.push_back("op index out of range");
            break;
        }
    }
    bool edges_ok = true;
    for (const auto& [i, j] : cell.edges) {
        if (i < 0 || j >= params.n_nodes || i >= j) {
            violations.push_back("edge endpoints invalid");
            edges_ok = false;
            break;
        }
    }
    if (edges_ok) {
        auto sorted = cell.edges;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            violations.push_back("duplicate edge");
        }
    }
    if (static_cast<int>(cell.edges.size()) > params.max_edges) {
        violations.push_back("edge budget exceeded");
    }
    if (!edges_ok || !has_input_output_path(cell, params.n_nodes)) {
        violations.push_back("no input->output path");
    }
    return violations;
}

bool is_valid(const Cell& cell, const SpaceParams& params) {
    return validate(cell, params).empty();
}

std::string canonical_form(const Cell& cell, const SpaceParams& params) {
    const int n_inter = params.n_intermediate();
    if (n_inter > 8) {
        throw std::invalid_argument("canonical_form: brute-force canonicalization is "
                                    "limited to 8 intermediate nodes");
    }
    std::vector<int> perm(n_inter);
    std::iota(perm.begin(), perm.end(), 0);

    std::string best;
    do {
        // perm[k] is the new position (0-based among intermediates) of the
        // intermediate originally at position k. Only direction-preserving
        // relabelings are isomorphisms: every edge must stay forward.
        auto map_node = [&](int v) {
            if (v == 0 || v == params.n_nodes - 1) {
                return v;
            }
            return perm[v - 1] + 1;
        };
        Cell relabeled;
        relabeled.ops.resize(n_inter);
        for (int k = 0; k < n_inter; ++k) {
            relabeled.ops[perm[k]] = cell.ops[k];
        }
        bool forward = true;
        for (const auto& [i, j] : cell.edges) {
            const int a = map_node(i);
            const int b = map_node(j);
            if (a >= b) {
                forward = false;
                break;
            }
            relabeled.edges.emplace_back(a, b);
        }
        if (!forward) {
            continue;
        }
        std::string form = cell_to_text(relabeled);
        if (best.empty() || form < best) {
            best = std::move(form);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::uint64_t canonical_hash(const Cell& cell, const SpaceParams& params) {
    return fnv1a(canonical_form(cell, params));
}

std::string cell_to_text(const Cell& cell) {
    auto edges = cell.edges;
    std::sort(edges.begin(), edges.end());
    std::ostringstream out;
    out << "ops=[";
    for (std::size_t k = 0; k < cell.ops.size(); ++k) {
        if (k > 0) {
            out << ",";
        }
        out << cell.ops[k];
    }
    out << "];edges=[";
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (k > 0) {
            out << ",";
        }
        out << "(" << edges[k].first << "," << edges[k].second << ")";
    }
    out << "]";
    return out.str();
}

namespace {

struct TextCursor {
    const std::string& s;
    std::size_t pos = 0;

    void expect(std::string_view token) {
        if (s.compare(pos, token.size(), token) != 0) {
            throw std::invalid_argument("cell text: expected '" + std::string(token) +
                                        "' at position " + std::to_string(pos));
        }
        pos += token.size();
    }

    bool peek(char c) const { return pos < s.size() && s[pos] == c; }

    int integer() {
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  (pos == start && s[pos] == '-'))) {
            ++pos;
        }
        if (pos == start) {
            throw std::invalid_argument("cell text: expected integer at position " +
                                        std::to_string(start));
        }
        return std::stoi(s.substr(start, pos - start));
    }
};

}  // namespace

Cell cell_from_text(const std::string& text) {
    std::string stripped;
    stripped.reserve(text.size());
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            stripped.push_back(c);
        }
    }
    TextCursor cur{stripped};
    Cell cell;
    cur.expect("ops=[");
    if (!cur.peek(']')) {
        cell.ops.push_back(cur.integer());
        while (cur.peek(',')) {
            ++cur.pos;
            cell.ops.push_back(cur.integer());
        }
    }
    cur.expect("];edges=[");
    if (!cur.peek(']')) {
        auto parse_edge = [&] {
            cur.expect("(");
            const int i = cur.integer();
            cur.expect(",");
            const int j = cur.integer();
            cur.expect(")");
            cell.edges.emplace_back(i, j);
        };
        parse_edge();
        while (cur.peek(',')) {
            ++cur.pos;
            parse_edge();
        }
    }
    cur.expect("]");
    if (cur.pos != stripped.size()) {
        throw std::invalid_argument("cell text: trailing characters after ']'");
    }
    std::sort(cell.edges.begin(), cell.edges.end());
    return cell;
}

}  // namespace nasbo
