#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "nasbo/encodings.hpp"

using namespace nasbo;

namespace {

SpaceParams nasbench_space() { return SpaceParams{}; }

SpaceParams small_space() {
    SpaceParams s;
    s.n_nodes = 4;
    s.n_ops = 2;
    s.max_edges = 6;
    return s;
}

std::vector<Cell> enumerate_cells(const SpaceParams& space) {
    std::vector<Edge> slots;
    for (int i = 0; i < space.n_nodes; ++i) {
        for (int j = i + 1; j < space.n_nodes; ++j) {
            slots.emplace_back(i, j);
        }
    }
    std::vector<Cell> cells;
    int op_combos = 1;
    for (int k = 0; k < space.n_intermediate(); ++k) {
        op_combos *= space.n_ops;
    }
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        Cell cell;
        for (std::size_t b = 0; b < slots.size(); ++b) {
            if (mask >> b & 1u) {
                cell.edges.push_back(slots[b]);
            }
        }
        for (int combo = 0; combo < op_combos; ++combo) {
            cell.ops.clear();
            int rest = combo;
            for (int k = 0; k < space.n_intermediate(); ++k) {
                cell.ops.push_back(rest % space.n_ops);
                rest /= space.n_ops;
            }
            if (is_valid(cell, space)) {
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

}  // namespace

TEST_SUITE_BEGIN("encodings");

TEST_CASE("path table sizes match the closed form") {
    CHECK(enumerate_paths(nasbench_space()).size() == 364);

    SpaceParams two;
    two.n_nodes = 2;
    two.max_edges = 1;
    const auto table = enumerate_paths(two);
    REQUIRE(table.size() == 1);
    CHECK(table.paths[0].empty());

    // sequences of length <= 3 form the 40-entry prefix
    const auto full = enumerate_paths(nasbench_space());
    std::size_t up_to_3 = 0;
    while (up_to_3 < full.size() && full.paths[up_to_3].size() <= 3) {
        ++up_to_3;
    }
    CHECK(up_to_3 == 40);
}

TEST_CASE("path table ordering is by length then lexicographic") {
    const auto table = enumerate_paths(nasbench_space());
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& a = table.paths[i - 1];
        const auto& b = table.paths[i];
        const bool ordered = a.size() < b.size() || (a.size() == b.size() && a < b);
        REQUIRE(ordered);
    }
    // per-length counts are r^length
    std::map<std::size_t, std::size_t> by_len;
    for (const auto& p : table.paths) {
        ++by_len[p.size()];
    }
    std::size_t expect = 1;
    for (std::size_t len = 0; len <= 5; ++len) {
        CHECK(by_len[len] == expect);
        expect *= 3;
    }
}

TEST_CASE("path table cap is enforced") {
    SpaceParams big;
    big.n_nodes = 30;
    big.n_ops = 5;
    big.max_edges = 200;
    CHECK_THROWS_AS(enumerate_paths(big), std::length_error);
}

TEST_CASE("encode_path on simple cells") {
    const SpaceParams space = nasbench_space();
    const auto table = enumerate_paths(space);

    Cell direct;
    direct.ops = {0, 0, 0, 0, 0};
    direct.edges = {{0, 6}};
    const auto v = encode_path(direct, table);
    REQUIRE(v.size() == table.size());
    CHECK(v[0] == 1.0);
    CHECK(std::count(v.begin(), v.end(), 1.0) == 1);

    Cell two_hop;
    two_hop.ops = {1, 0, 0, 0, 0};  // node 1 carries op 1
    two_hop.edges = {{0, 1}, {1, 6}};
    const auto w = encode_path(two_hop, table);
    CHECK(w[0] == 0.0);  // no direct edge
    CHECK(w[table.index_of({1})] == 1.0);
    CHECK(std::count(w.begin(), w.end(), 1.0) == 1);
}

TEST_CASE("truncation keeps a strict prefix") {
    const SpaceParams space = nasbench_space();
    const auto table = enumerate_paths(space);
    Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        const Cell cell = random_spec(space, rng);
        const auto full = encode_path(cell, table);
        const auto trunc = encode_path(cell, table, 40);
        REQUIRE(trunc.size() == 40);
        for (std::size_t j = 0; j < 40; ++j) {
            CHECK(trunc[j] == full[j]);
        }
    }
    CHECK_THROWS_AS(encode_path(Cell{{0, 0, 0, 0, 0}, {{0, 6}}}, table, 1000),
                    std::invalid_argument);
}

TEST_CASE("truncation to 40 rarely loses any set bit") {
    // frozen from this sampler: paths of length >= 5 appear in ~1.5% of
    // random cells, so the dropped suffix is nonzero for well under 2.5%
    const SpaceParams space = nasbench_space();
    const auto table = enumerate_paths(space);
    Rng rng(103);
    int suffix_nonzero = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        const auto full = encode_path(random_spec(space, rng), table);
        if (std::any_of(full.begin() + 40, full.end(), [](double b) { return b != 0.0; })) {
            ++suffix_nonzero;
        }
    }
    CHECK(static_cast<double>(suffix_nonzero) / trials < 0.025);
}

TEST_CASE("encode_adjacency layout and length") {
    const SpaceParams space = nasbench_space();
    Cell direct;
    direct.ops = {2, 1, 0, 1, 2};
    direct.edges = {{0, 6}};
    const auto v = encode_adjacency(direct, space);
    REQUIRE(v.size() == 36);  // 21 edge bits + 5*3 one-hot ops
    CHECK(std::count(v.begin(), v.begin() + 21, 1.0) == 1);
    CHECK(v[5] == 1.0);  // slot for (0,6) in row-major upper-triangular order
    for (int k = 0; k < 5; ++k) {
        CHECK(v[21 + k * 3 + direct.ops[k]] == 1.0);
        CHECK(std::count(v.begin() + 21 + k * 3, v.begin() + 21 + (k + 1) * 3, 1.0) == 1);
    }
}

TEST_CASE("isomorphic cells share path vectors but not adjacency vectors") {
    const SpaceParams space = small_space();
    const auto table = enumerate_paths(space);
    Cell a;
    a.ops = {0, 1};
    a.edges = {{0, 1}, {1, 3}};
    Cell b;  // same cell with intermediates relabeled
    b.ops = {1, 0};
    b.edges = {{0, 2}, {2, 3}};
    CHECK(canonical_hash(a, space) == canonical_hash(b, space));
    CHECK(encode_path(a, table) == encode_path(b, table));
    CHECK(encode_adjacency(a, space) != encode_adjacency(b, space));
}

TEST_CASE("path encoding is indexing-invariant over the exhaustive small space") {
    const SpaceParams space = small_space();
    const auto table = enumerate_paths(space);
    const auto cells = enumerate_cells(space);
    std::map<std::string, std::vector<double>> by_canon;
    for (const auto& cell : cells) {
        const auto key = canonical_form(cell, space);
        const auto vec = encode_path(cell, table);
        const auto [it, inserted] = by_canon.emplace(key, vec);
        if (!inserted) {
            CHECK(it->second == vec);
        }
    }
}

TEST_CASE("continuous adjacency encoding and exhaustive round-trip") {
    const SpaceParams space = nasbench_space();
    Cell direct;
    direct.ops = {0, 0, 0, 0, 0};
    direct.edges = {{0, 6}};
    const auto v = encode_continuous_adjacency(direct, space);
    REQUIRE(v.size() == 26);  // 21 edge reals + 5 op reals
    CHECK(v[5] == 1.0);
    for (int k = 0; k < 5; ++k) {
        CHECK(v[21 + k] == doctest::Approx(1.0 / 3.0));
    }

    Cell with_op2 = direct;
    with_op2.ops[2] = 2;
    CHECK(encode_continuous_adjacency(with_op2, space)[21 + 2] == 1.0);

    // thresholding edges at 0.5 and inverting op reals recovers every cell
    const SpaceParams small = small_space();
    for (const auto& cell : enumerate_cells(small)) {
        const auto enc = encode_continuous_adjacency(cell, small);
        Cell back;
        int slot = 0;
        for (int i = 0; i < small.n_nodes; ++i) {
            for (int j = i + 1; j < small.n_nodes; ++j, ++slot) {
                if (enc[slot] >= 0.5) {
                    back.edges.emplace_back(i, j);
                }
            }
        }
        for (int k = 0; k < small.n_intermediate(); ++k) {
            back.ops.push_back(
                static_cast<int>(std::lround(enc[slot + k] * small.n_ops)) - 1);
        }
        CHECK(back == cell);
    }
}

TEST_SUITE_END();
