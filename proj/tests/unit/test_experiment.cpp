#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nasbo/experiment.hpp"

using namespace nasbo;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct CsvRow {
    int trial;
    int query;
    double observed;
    double best;
    double test_error;
};

std::vector<CsvRow> read_rows(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        CsvRow row{};
        std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &row.trial, &row.query, &row.observed,
                    &row.best, &row.test_error);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("minimal config materializes the documented defaults") {
    const ExperimentConfig cfg = parse_text(
        "run.algorithms = random\n"
        "bench.kind = synthetic\n");
    CHECK(cfg.search.t0 == 10);
    CHECK(cfg.search.budget == 150);
    CHECK(cfg.search.ensemble_size == 5);
    CHECK(cfg.search.candidates_per_iter == 100);
    CHECK(cfg.search.elites == 10);
    CHECK(cfg.search.batch_k == 10);
    CHECK(cfg.search.mutation_rate == 1.0);
    CHECK(cfg.search.dedup);
    CHECK(cfg.search.acquisition.kind == AcqKind::ITS);
    CHECK(cfg.search.acquisition.beta == 0.5);
    CHECK(cfg.search.encoding.kind == EncodingKind::Path);
    CHECK(!cfg.search.encoding.truncate_len);
    CHECK(cfg.search.predictor.n_layers == 10);
    CHECK(cfg.search.predictor.width == 20);
    CHECK(cfg.search.predictor.learning_rate == 0.01);
    CHECK(cfg.search.predictor.epochs == 200);
    CHECK(cfg.search.predictor.loss == Loss::MAPE);
    CHECK(cfg.evolution_population == 30);
    CHECK(cfg.evolution_sample_size == 10);
    CHECK(cfg.objective.kind == Objective::Kind::Validation);
    CHECK(cfg.objective.dual.loss_lb == 4.8);
    CHECK(cfg.objective.dual.exponent == 0.5);
    CHECK(cfg.trials == 1);
    CHECK(cfg.search.space.n_nodes == 7);
    CHECK(cfg.search.space.n_ops == 3);
    CHECK(cfg.search.space.max_edges == 9);
}

TEST_CASE("config errors carry the key and line") {
    CHECK_THROWS_WITH_AS(parse_text("run.algorithms = random\nfoo = 1\nbench.kind = synthetic\n"),
                         doctest::Contains("foo"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_text("run.algorithms = random\nrun.trials = soon\n"),
                         doctest::Contains("line 2"), std::runtime_error);
    CHECK_THROWS_AS(parse_text("run.algorithms = random\n"), std::runtime_error);  // no benchmark
    CHECK_THROWS_WITH_AS(parse_text("run.algorithms = warp_drive\nbench.kind = synthetic\n"),
                         doctest::Contains("warp_drive"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_text("run.algorithms = random\nbench.kind = synthetic\n"
                   "encoding.truncate_len = 1000\n"),
        doctest::Contains("truncate_len"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_text("run.algorithms = random\nbench.kind = tabular\n"),
                         doctest::Contains("bench.path"), std::runtime_error);
}

TEST_CASE("single random trial emits a monotone csv") {
    const fs::path dir = fs::temp_directory_path() / "nasbo_exp_single";
    fs::remove_all(dir);
    ExperimentConfig cfg = parse_text(
        "run.algorithms = random\n"
        "bench.kind = synthetic\n"
        "bench.seed = 4\n"
        "search.budget = 10\n"
        "run.trials = 1\n");
    cfg.output_dir = dir.string();
    REQUIRE(run_experiment(cfg) == 0);

    const auto rows = read_rows(dir / "random.csv");
    REQUIRE(rows.size() == 10);
    double best = rows.front().best;
    for (const auto& row : rows) {
        CHECK(row.trial == 0);
        CHECK(row.best <= best + 1e-15);
        best = row.best;
    }
    CHECK(read_file(dir / "resolved_config.txt").find("synthetic-oracle-v1") !=
          std::string::npos);
}

TEST_CASE("identical configs produce byte-identical outputs") {
    ExperimentConfig cfg = parse_text(
        "run.algorithms = random, evolution\n"
        "bench.kind = synthetic\n"
        "bench.seed = 9\n"
        "search.budget = 25\n"
        "evolution.population = 8\n"
        "evolution.sample_size = 3\n"
        "run.trials = 2\n");

    const fs::path dir_a = fs::temp_directory_path() / "nasbo_exp_a";
    const fs::path dir_b = fs::temp_directory_path() / "nasbo_exp_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    cfg.output_dir = dir_a.string();
    REQUIRE(run_experiment(cfg) == 0);
    cfg.output_dir = dir_b.string();
    REQUIRE(run_experiment(cfg) == 0);

    for (const char* name : {"random.csv", "evolution.csv", "summary.csv"}) {
        CHECK(read_file(dir_a / name) == read_file(dir_b / name));
    }
}

TEST_CASE("summary statistics agree with an independent recomputation") {
    const fs::path dir = fs::temp_directory_path() / "nasbo_exp_summary";
    fs::remove_all(dir);
    ExperimentConfig cfg = parse_text(
        "run.algorithms = random, evolution\n"
        "bench.kind = synthetic\n"
        "bench.seed = 2\n"
        "search.budget = 30\n"
        "evolution.population = 10\n"
        "evolution.sample_size = 4\n"
        "run.trials = 3\n");
    cfg.output_dir = dir.string();
    REQUIRE(run_experiment(cfg) == 0);

    // recompute mean/std of best_so_far at each checkpoint from the raw rows
    for (const char* algorithm : {"random", "evolution"}) {
        std::map<int, std::vector<double>> best_by_trial;  // trial -> trajectory
        for (const auto& row : read_rows(dir / (std::string(algorithm) + ".csv"))) {
            auto& traj = best_by_trial[row.trial];
            REQUIRE(static_cast<int>(traj.size()) == row.query);
            traj.push_back(row.best);
        }
        REQUIRE(best_by_trial.size() == 3);

        std::ifstream summary(dir / "summary.csv");
        std::string line;
        std::getline(summary, line);
        int checked = 0;
        while (std::getline(summary, line)) {
            char name[64];
            int query = 0;
            double mean = 0.0;
            double stddev = 0.0;
            REQUIRE(std::sscanf(line.c_str(), "%63[^,],%d,%lf,%lf", name, &query, &mean,
                                &stddev) == 4);
            if (std::string(name) != algorithm) {
                continue;
            }
            double want_mean = 0.0;
            for (const auto& [trial, traj] : best_by_trial) {
                want_mean += traj[query - 1];
            }
            want_mean /= best_by_trial.size();
            double ss = 0.0;
            for (const auto& [trial, traj] : best_by_trial) {
                ss += (traj[query - 1] - want_mean) * (traj[query - 1] - want_mean);
            }
            const double want_std = std::sqrt(ss / (best_by_trial.size() - 1));
            CHECK(std::abs(mean - want_mean) < 1e-9);
            CHECK(std::abs(stddev - want_std) < 1e-9);
            ++checked;
        }
        CHECK(checked == 3);  // checkpoints 10, 20, 30
    }
}

TEST_CASE("render_config echoes every resolved key") {
    const ExperimentConfig cfg = parse_text(
        "run.algorithms = ensemble_bo\n"
        "bench.kind = synthetic\n"
        "encoding.truncate_len = 40\n");
    const std::string text = render_config(cfg, "synthetic-oracle-v1");
    for (const char* key :
         {"run.algorithms", "search.budget", "predictor.epochs", "acq.kind",
          "encoding.truncate_len = 40", "oracle_version = synthetic-oracle-v1"}) {
        CHECK(text.find(key) != std::string::npos);
    }
}

TEST_SUITE_END();
