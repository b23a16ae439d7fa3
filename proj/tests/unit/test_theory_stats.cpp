#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nasbo/theory_stats.hpp"

using namespace nasbo;

namespace {

double choose(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double c = 1.0;
    for (int i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
    }
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("theory_stats");

TEST_CASE("num_paths closed form") {
    CHECK(num_paths(5, 3) == 364);
    CHECK(num_paths(0, 3) == 1);
    CHECK(num_paths(3, 3) == 40);
    CHECK(num_paths(4, 8) == 4681);
    CHECK_THROWS_AS(num_paths(100, 10), std::overflow_error);
}

TEST_CASE("expected_paths matches direct evaluation") {
    CHECK(expected_paths(7, 9.0, 1) == doctest::Approx(3.0 / 7.0));
    CHECK(expected_paths(7, 9.0, 2) == doctest::Approx(5.0 * std::pow(3.0 / 7.0, 2)));
    CHECK(expected_paths(7, 9.0, 7) == 0.0);  // l > n-1, empty binomial
    CHECK(expected_paths(7, 9.0, 0) == 0.0);
    // generic n, k, l against an independent binomial computation
    for (int n : {5, 9, 14}) {
        for (int l = 1; l <= n - 1; ++l) {
            const double p = 2.0 * (n + 1.0) / (n * (n - 1.0));
            const double want = choose(n - 2, l - 1) * std::pow(p, l);
            CHECK(expected_paths(n, n + 1.0, l) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("tail_mass sums the closed form from ceil(log_r n)") {
    // n = 7, r = 3: ceil(log_3 7) = 2, so the tail starts at length 2
    double manual = 0.0;
    for (int l = 2; l <= 6; ++l) {
        manual += expected_paths(7, 9.0, l);
    }
    CHECK(tail_mass(7, 9.0, 3) == doctest::Approx(manual).epsilon(1e-12));
    CHECK(tail_mass(7, 9.0, 3) > 0.0);

    // exact powers of r must not shift the lower limit
    double manual2 = 0.0;
    for (int l = 3; l <= 7; ++l) {
        manual2 += expected_paths(8, 9.0, l);  // ceil(log_2 8) = 3
    }
    CHECK(tail_mass(8, 9.0, 2) == doctest::Approx(manual2).epsilon(1e-12));

    // minimal n where the summation range is empty
    CHECK(tail_mass(1, 1.0, 2) == 0.0);
}

TEST_CASE("tail_mass is monotone decreasing per term beyond the cutoff") {
    for (int n : {64, 512, 4096}) {
        int lo = 0;
        int pow = 1;
        while (pow < n) {
            pow *= 2;
            ++lo;
        }
        double prev = expected_paths(n, n + 1.0, lo);
        for (int l = lo + 1; l < std::min(n - 1, lo + 30); ++l) {
            const double cur = expected_paths(n, n + 1.0, l);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("binomial coefficient bounds hold for n up to 60") {
    for (int n = 1; n <= 60; ++n) {
        for (int l = 1; l <= n; ++l) {
            const double c = choose(n, l);
            const double lower = std::pow(static_cast<double>(n) / l, l);
            const double upper = std::pow(std::exp(1.0) * n / l, l);
            CHECK(lower <= c * (1 + 1e-12));
            CHECK(c <= upper * (1 + 1e-12));
        }
    }
}

TEST_CASE("monte carlo on the pre-rejection model matches expected_paths") {
    RandomGraphParams params;
    params.n = 7;
    params.k = 9.0;
    params.r = 3;
    Rng rng(211);
    McOptions options;
    options.condition_on_connectivity = false;
    const auto stats = mc_path_probs(params, 100'000, rng, options);
    REQUIRE(stats.rows.size() == 6);
    CHECK(stats.acceptance_rate == 1.0);
    for (int l = 1; l <= 4; ++l) {
        const auto& row = stats.rows[l - 1];
        const double expect = expected_paths(7, 9.0, l);
        CHECK(std::abs(row.expected_node_paths - expect) < 3.0 * row.node_paths_se + 1e-9);
    }
}

TEST_CASE("random_spec monte carlo rows: frozen values for this sampler") {
    // Frozen from an independent simulation of the same semantics
    // (edge probability 1/2, <=9 edges, connected; designated path = the
    // all-op-0 sequence realized by any node chain).
    SpaceParams space;
    Rng rng(223);
    const auto stats = mc_path_probs(space, 100'000, rng);
    REQUIRE(stats.rows.size() == 6);
    CHECK(stats.rows[0].probability == doctest::Approx(0.459).epsilon(0.03));
    CHECK(stats.rows[1].probability == doctest::Approx(0.256).epsilon(0.04));
    CHECK(stats.rows[2].probability == doctest::Approx(0.0557).epsilon(0.10));
    CHECK(stats.rows[3].probability == doctest::Approx(0.0059).epsilon(0.25));
    CHECK(stats.rows[0].total_paths == 1);
    CHECK(stats.rows[1].total_paths == 3);
    CHECK(stats.rows[2].total_paths == 9);
    CHECK(stats.rows[3].total_paths == 27);
}

TEST_CASE("path-length probabilities do not depend on the op count") {
    // op labels are drawn independently of edges, so structural statistics
    // (node-path counts, and the op-free length-1 probability) match across r
    SpaceParams base;
    std::vector<double> counts;
    std::vector<double> direct;
    for (int r : {2, 3, 5}) {
        SpaceParams space = base;
        space.n_ops = r;
        Rng rng(401 + r);
        const auto stats = mc_path_probs(space, 40'000, rng);
        counts.push_back(stats.rows[1].expected_node_paths);
        direct.push_back(stats.rows[0].probability);
    }
    CHECK(counts[0] == doctest::Approx(counts[1]).epsilon(0.05));
    CHECK(counts[1] == doctest::Approx(counts[2]).epsilon(0.05));
    CHECK(direct[0] == doctest::Approx(direct[1]).epsilon(0.03));
    CHECK(direct[1] == doctest::Approx(direct[2]).epsilon(0.03));
}

TEST_CASE("labeled counts are consistent with designated probabilities") {
    // probability x r^(l-1) tracks the labeled expected count per length
    SpaceParams space;
    Rng rng(499);
    const auto stats = mc_path_probs(space, 100'000, rng);
    for (int l = 2; l <= 3; ++l) {
        const auto& row = stats.rows[l - 1];
        const double implied = row.probability * static_cast<double>(row.total_paths);
        // designated op-sequences cluster less than average, so allow slack
        const double se = 3.0 * std::sqrt(row.expected_labeled / 100'000.0) + 0.02;
        CHECK(std::abs(implied - row.expected_labeled) <
              0.25 * row.expected_labeled + se);
    }
}

TEST_CASE("csv emission has the table columns") {
    SpaceParams space;
    Rng rng(7);
    const auto stats = mc_path_probs(space, 1'000, rng);
    const std::string csv = path_stats_csv(stats);
    CHECK(csv.rfind("path_length,probability,total_num_paths,expected_num_paths\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
}

TEST_SUITE_END();
