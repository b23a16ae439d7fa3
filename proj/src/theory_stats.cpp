#include "nasbo/theory_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include "nasbo/encodings.hpp"

namespace nasbo {

std::uint64_t num_paths(int n_intermediate, int r) {
    if (n_intermediate < 0 || r < 1) {
        throw std::invalid_argument("num_paths: need n_intermediate >= 0 and r >= 1");
    }
    std::uint64_t total = 0;
    std::uint64_t pow = 1;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    for (int i = 0; i <= n_intermediate; ++i) {
        if (total > max - pow) {
            throw std::overflow_error("num_paths: sum exceeds 64-bit range");
        }
        total += pow;
        if (i < n_intermediate) {
            if (pow > max / static_cast<std::uint64_t>(r)) {
                throw std::overflow_error("num_paths: sum exceeds 64-bit range");
            }
            pow *= static_cast<std::uint64_t>(r);
        }
    }
    return total;
}

double expected_paths(int n, double k, int l) {
    if (l < 1 || l > n - 1) {
        return 0.0;
    }
    // C(n-2, l-1) * p^l in log space, p = 2k/(n(n-1))
    const double log_choose =
        std::lgamma(n - 1.0) - std::lgamma(static_cast<double>(l)) - std::lgamma(n - l + 0.0);
    const double log_p = std::log(2.0 * k) - std::log(static_cast<double>(n)) -
                         std::log(static_cast<double>(n - 1));
    return std::exp(log_choose + static_cast<double>(l) * log_p);
}

double tail_mass(int n, double k, int r) {
    if (r < 2) {
        throw std::invalid_argument("tail_mass: need r >= 2");
    }
    // smallest integer l with r^l >= n, i.e. ceil(log_r n) computed exactly
    int lo = 0;
    std::uint64_t pow = 1;
    while (pow < static_cast<std::uint64_t>(n)) {
        pow *= static_cast<std::uint64_t>(r);
        ++lo;
    }
    double total = 0.0;
    for (int l = std::max(lo, 1); l <= n - 1; ++l) {
        const double term = expected_paths(n, k, l);
        total += term;
        // terms decay superexponentially once l exceeds the mode
        if (l > lo + 2 && term < total * 1e-18) {
            break;
        }
    }
    return total;
}

namespace {

struct DrawSpec {
    int n = 0;
    int r = 0;
    double edge_prob = 0.5;
    int max_edges = std::numeric_limits<int>::max();
};

PathLengthStats run_mc(const DrawSpec& spec, std::uint64_t trials, Rng& rng,
                       const McOptions& options) {
    if (trials < 1) {
        throw std::invalid_argument("mc_path_probs: need trials >= 1");
    }
    const int n = spec.n;
    SpaceParams path_space;
    path_space.n_nodes = n;
    path_space.n_ops = spec.r;
    path_space.max_edges = n * (n - 1) / 2;

    std::vector<std::uint64_t> designated_hits(n, 0);
    std::vector<double> labeled_counts(n, 0.0);
    std::vector<double> node_path_counts(n, 0.0);
    std::vector<double> node_path_sq(n, 0.0);

    std::uint64_t draws = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Cell cell;
        while (true) {
            ++draws;
            cell = Cell{};
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    if (rng.bernoulli(spec.edge_prob)) {
                        cell.edges.emplace_back(i, j);
                    }
                }
            }
            cell.ops.resize(n - 2);
            for (auto& op : cell.ops) {
                op = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(spec.r)));
            }
            if (static_cast<int>(cell.edges.size()) > spec.max_edges) {
                continue;
            }
            if (options.condition_on_connectivity && !has_input_output_path(cell, n)) {
                continue;
            }
            break;
        }

        for (const auto& seq : cell_paths(cell, path_space)) {
            const int len = static_cast<int>(seq.size()) + 1;
            labeled_counts[len] += 1.0;
            if (std::all_of(seq.begin(), seq.end(), [](int op) { return op == 0; })) {
                ++designated_hits[len];
            }
        }

        // node-path census by length: dp[v][l] = # node paths 0->v with l edges
        std::vector<std::vector<double>> dp(n, std::vector<double>(n, 0.0));
        dp[0][0] = 1.0;
        auto edges = cell.edges;
        std::sort(edges.begin(), edges.end());
        for (const auto& [i, j] : edges) {
            for (int l = 0; l + 1 < n; ++l) {
                dp[j][l + 1] += dp[i][l];
            }
        }
        for (int l = 1; l < n; ++l) {
            node_path_counts[l] += dp[n - 1][l];
            node_path_sq[l] += dp[n - 1][l] * dp[n - 1][l];
        }
    }

    PathLengthStats stats;
    stats.trials = trials;
    stats.acceptance_rate = static_cast<double>(trials) / static_cast<double>(draws);
    std::uint64_t labeled_total = 1;
    for (int l = 1; l <= n - 1; ++l) {
        PathLengthRow row;
        row.length = l;
        row.probability = static_cast<double>(designated_hits[l]) / static_cast<double>(trials);
        row.total_paths = labeled_total;
        row.expected_labeled = labeled_counts[l] / static_cast<double>(trials);
        row.expected_node_paths = node_path_counts[l] / static_cast<double>(trials);
        const double var =
            node_path_sq[l] / static_cast<double>(trials) -
            row.expected_node_paths * row.expected_node_paths;
        row.node_paths_se = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
        stats.rows.push_back(row);
        if (labeled_total <= std::numeric_limits<std::uint64_t>::max() /
                                 static_cast<std::uint64_t>(spec.r)) {
            labeled_total *= static_cast<std::uint64_t>(spec.r);
        }
    }
    return stats;
}

}  // namespace

PathLengthStats mc_path_probs(const SpaceParams& model, std::uint64_t trials, Rng& rng,
                              const McOptions& options) {
    DrawSpec spec;
    spec.n = model.n_nodes;
    spec.r = model.n_ops;
    spec.edge_prob = 0.5;
    spec.max_edges = model.max_edges;
    return run_mc(spec, trials, rng, options);
}

PathLengthStats mc_path_probs(const RandomGraphParams& model, std::uint64_t trials, Rng& rng,
                              const McOptions& options) {
    DrawSpec spec;
    spec.n = model.n;
    spec.r = model.r;
    const double slots = static_cast<double>(model.n) * (model.n - 1) / 2.0;
    spec.edge_prob = std::min(1.0, model.k / slots);
    return run_mc(spec, trials, rng, options);
}

std::string path_stats_csv(const PathLengthStats& stats) {
    std::string out = "path_length,probability,total_num_paths,expected_num_paths\n";
    char buf[160];
    for (const auto& row : stats.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%llu,%.17g\n", row.length, row.probability,
                      static_cast<unsigned long long>(row.total_paths), row.expected_labeled);
        out += buf;
    }
    return out;
}

}  // namespace nasbo
