#include "nasbo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nasbo/theory_stats.hpp"

namespace nasbo {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + message);
}

long long to_int(const std::string& value, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument("trailing");
        }
        return v;
    } catch (const std::exception&) {
        fail(line, "key '" + key + "' expects an integer, got '" + value + "'");
    }
}

double to_real(const std::string& value, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument("trailing");
        }
        return v;
    } catch (const std::exception&) {
        fail(line, "key '" + key + "' expects a number, got '" + value + "'");
    }
}

bool to_bool(const std::string& value, int line, const std::string& key) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    fail(line, "key '" + key + "' expects true/false, got '" + value + "'");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    bool bench_seen = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(line_no, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            fail(line_no, "key '" + key + "' has no value");
        }

        if (key == "run.algorithms") {
            cfg.algorithms = split_list(value);
            for (const auto& a : cfg.algorithms) {
                if (a != "ensemble_bo" && a != "random" && a != "evolution" && a != "gp_bo") {
                    fail(line_no, "unknown algorithm '" + a + "'");
                }
            }
        } else if (key == "run.trials") {
            cfg.trials = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "run.base_seed") {
            cfg.base_seed = static_cast<std::uint64_t>(to_int(value, line_no, key));
        } else if (key == "run.output_dir") {
            cfg.output_dir = value;
        } else if (key == "run.workers") {
            cfg.workers = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "bench.kind") {
            if (value == "synthetic") {
                cfg.benchmark.kind = BenchmarkSpec::Kind::Synthetic;
            } else if (value == "tabular") {
                cfg.benchmark.kind = BenchmarkSpec::Kind::Tabular;
            } else {
                fail(line_no, "bench.kind must be synthetic or tabular");
            }
            bench_seen = true;
        } else if (key == "bench.seed") {
            cfg.benchmark.seed = static_cast<std::uint64_t>(to_int(value, line_no, key));
        } else if (key == "bench.path") {
            cfg.benchmark.path = value;
        } else if (key == "bench.mode") {
            if (value == "mean") {
                cfg.benchmark.mode = QueryMode::MeanValidation;
            } else if (value == "random") {
                cfg.benchmark.mode = QueryMode::RandomValidation;
            } else {
                fail(line_no, "bench.mode must be mean or random");
            }
        } else if (key == "objective.kind") {
            if (value == "validation") {
                cfg.objective.kind = Objective::Kind::Validation;
            } else if (value == "dual") {
                cfg.objective.kind = Objective::Kind::Dual;
            } else {
                fail(line_no, "objective.kind must be validation or dual");
            }
        } else if (key == "objective.loss_lb") {
            cfg.objective.dual.loss_lb = to_real(value, line_no, key);
        } else if (key == "objective.exponent") {
            cfg.objective.dual.exponent = to_real(value, line_no, key);
        } else if (key == "space.n_nodes") {
            cfg.search.space.n_nodes = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "space.n_ops") {
            cfg.search.space.n_ops = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "space.max_edges") {
            cfg.search.space.max_edges = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.t0") {
            cfg.search.t0 = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.budget") {
            cfg.search.budget = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.ensemble_size") {
            cfg.search.ensemble_size = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.candidates") {
            cfg.search.candidates_per_iter = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.elites") {
            cfg.search.elites = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.batch_k") {
            cfg.search.batch_k = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.mutation_rate") {
            cfg.search.mutation_rate = to_real(value, line_no, key);
        } else if (key == "search.dedup") {
            cfg.search.dedup = to_bool(value, line_no, key);
        } else if (key == "search.candidates_from") {
            if (value == "mutation") {
                cfg.search.candidate_gen = CandidateGen::Mutation;
            } else if (value == "random") {
                cfg.search.candidate_gen = CandidateGen::Random;
            } else {
                fail(line_no, "search.candidates_from must be mutation or random");
            }
        } else if (key == "search.random_pool") {
            cfg.search.random_pool = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "search.gp_distance") {
            if (value == "adjacency") {
                cfg.gp_distance = GpDistance::AdjacencyHamming;
            } else if (value == "path") {
                cfg.gp_distance = GpDistance::PathHamming;
            } else {
                fail(line_no, "search.gp_distance must be adjacency or path");
            }
        } else if (key == "acq.kind") {
            try {
                cfg.search.acquisition.kind = acq_kind_from_name(value);
            } catch (const std::exception& e) {
                fail(line_no, e.what());
            }
        } else if (key == "acq.beta") {
            cfg.search.acquisition.beta = to_real(value, line_no, key);
        } else if (key == "encoding.kind") {
            try {
                cfg.search.encoding.kind = encoding_kind_from_name(value);
            } catch (const std::exception& e) {
                fail(line_no, e.what());
            }
        } else if (key == "encoding.truncate_len") {
            cfg.search.encoding.truncate_len =
                static_cast<std::size_t>(to_int(value, line_no, key));
        } else if (key == "predictor.layers") {
            cfg.search.predictor.n_layers = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "predictor.width") {
            cfg.search.predictor.width = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "predictor.lr") {
            cfg.search.predictor.learning_rate = to_real(value, line_no, key);
        } else if (key == "predictor.epochs") {
            cfg.search.predictor.epochs = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "predictor.loss") {
            if (value == "mae") {
                cfg.search.predictor.loss = Loss::MAE;
            } else if (value == "mape") {
                cfg.search.predictor.loss = Loss::MAPE;
            } else {
                fail(line_no, "predictor.loss must be mae or mape");
            }
        } else if (key == "predictor.y_lb") {
            cfg.search.predictor.y_lb = to_real(value, line_no, key);
        } else if (key == "predictor.batch_size") {
            cfg.search.predictor.batch_size = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "evolution.population") {
            cfg.evolution_population = static_cast<int>(to_int(value, line_no, key));
        } else if (key == "evolution.sample_size") {
            cfg.evolution_sample_size = static_cast<int>(to_int(value, line_no, key));
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    if (cfg.algorithms.empty()) {
        throw std::runtime_error("config: run.algorithms is required");
    }
    if (!bench_seen) {
        throw std::runtime_error("config: bench.kind is required");
    }
    if (cfg.benchmark.kind == BenchmarkSpec::Kind::Tabular && cfg.benchmark.path.empty()) {
        throw std::runtime_error("config: bench.path is required for tabular benchmarks");
    }
    if (cfg.trials < 1) {
        throw std::runtime_error("config: run.trials must be >= 1");
    }
    if (cfg.workers < 1) {
        throw std::runtime_error("config: run.workers must be >= 1");
    }
    if (cfg.search.t0 > cfg.search.budget) {
        throw std::runtime_error("config: search.t0 must not exceed search.budget");
    }
    if (cfg.search.encoding.truncate_len) {
        const std::uint64_t universe =
            num_paths(cfg.search.space.n_intermediate(), cfg.search.space.n_ops);
        if (*cfg.search.encoding.truncate_len > universe) {
            throw std::runtime_error("config: encoding.truncate_len exceeds the path universe (" +
                                     std::to_string(universe) + ")");
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open " + path);
    }
    return parse_config(in);
}

std::string render_config(const ExperimentConfig& cfg, const std::string& oracle_version) {
    std::ostringstream out;
    out << "# resolved configuration (defaults materialized)\n";
    out << "# oracle_version = " << oracle_version << "\n";
    out << "run.algorithms = ";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        out << (i ? ", " : "") << cfg.algorithms[i];
    }
    out << "\n";
    out << "run.trials = " << cfg.trials << "\n";
    out << "run.base_seed = " << cfg.base_seed << "\n";
    out << "run.output_dir = " << cfg.output_dir << "\n";
    out << "run.workers = " << cfg.workers << "\n";
    out << "bench.kind = "
        << (cfg.benchmark.kind == BenchmarkSpec::Kind::Synthetic ? "synthetic" : "tabular") << "\n";
    if (cfg.benchmark.kind == BenchmarkSpec::Kind::Synthetic) {
        out << "bench.seed = " << cfg.benchmark.seed << "\n";
    } else {
        out << "bench.path = " << cfg.benchmark.path << "\n";
    }
    out << "bench.mode = " << (cfg.benchmark.mode == QueryMode::MeanValidation ? "mean" : "random")
        << "\n";
    out << "objective.kind = "
        << (cfg.objective.kind == Objective::Kind::Validation ? "validation" : "dual") << "\n";
    out << "objective.loss_lb = " << fmt(cfg.objective.dual.loss_lb) << "\n";
    out << "objective.exponent = " << fmt(cfg.objective.dual.exponent) << "\n";
    out << "space.n_nodes = " << cfg.search.space.n_nodes << "\n";
    out << "space.n_ops = " << cfg.search.space.n_ops << "\n";
    out << "space.max_edges = " << cfg.search.space.max_edges << "\n";
    out << "search.t0 = " << cfg.search.t0 << "\n";
    out << "search.budget = " << cfg.search.budget << "\n";
    out << "search.ensemble_size = " << cfg.search.ensemble_size << "\n";
    out << "search.candidates = " << cfg.search.candidates_per_iter << "\n";
    out << "search.elites = " << cfg.search.elites << "\n";
    out << "search.batch_k = " << cfg.search.batch_k << "\n";
    out << "search.mutation_rate = " << fmt(cfg.search.mutation_rate) << "\n";
    out << "search.dedup = " << (cfg.search.dedup ? "true" : "false") << "\n";
    out << "search.candidates_from = "
        << (cfg.search.candidate_gen == CandidateGen::Mutation ? "mutation" : "random") << "\n";
    out << "search.random_pool = " << cfg.search.random_pool << "\n";
    out << "search.gp_distance = "
        << (cfg.gp_distance == GpDistance::AdjacencyHamming ? "adjacency" : "path") << "\n";
    out << "acq.kind = " << acq_kind_name(cfg.search.acquisition.kind) << "\n";
    out << "acq.beta = " << fmt(cfg.search.acquisition.beta) << "\n";
    out << "encoding.kind = " << encoding_kind_name(cfg.search.encoding.kind) << "\n";
    if (cfg.search.encoding.truncate_len) {
        out << "encoding.truncate_len = " << *cfg.search.encoding.truncate_len << "\n";
    }
    out << "predictor.layers = " << cfg.search.predictor.n_layers << "\n";
    out << "predictor.width = " << cfg.search.predictor.width << "\n";
    out << "predictor.lr = " << fmt(cfg.search.predictor.learning_rate) << "\n";
    out << "predictor.epochs = " << cfg.search.predictor.epochs << "\n";
    out << "predictor.loss = " << (cfg.search.predictor.loss == Loss::MAE ? "mae" : "mape") << "\n";
    out << "predictor.y_lb = " << fmt(cfg.search.predictor.y_lb) << "\n";
    out << "predictor.batch_size = " << cfg.search.predictor.batch_size << "\n";
    out << "evolution.population = " << cfg.evolution_population << "\n";
    out << "evolution.sample_size = " << cfg.evolution_sample_size << "\n";
    return out.str();
}

BenchmarkOracle make_oracle(const ExperimentConfig& cfg) {
    BenchmarkOracle oracle =
        cfg.benchmark.kind == BenchmarkSpec::Kind::Synthetic
            ? BenchmarkOracle::synthetic(cfg.search.space, cfg.benchmark.seed)
            : BenchmarkOracle::load_tabular(cfg.benchmark.path);
    oracle.set_mode(cfg.benchmark.mode);
    return oracle;
}

TrialRecord run_one(const ExperimentConfig& cfg, const std::string& algorithm,
                    const BenchmarkOracle& base_oracle, std::uint64_t seed) {
    BenchmarkOracle oracle = base_oracle;  // fresh counter per run
    oracle.set_run_seed(seed);
    oracle.set_budget(cfg.search.budget);
    if (algorithm == "ensemble_bo") {
        return ensemble_bo_search(oracle, cfg.objective, cfg.search, seed);
    }
    if (algorithm == "random") {
        return random_search(oracle, cfg.objective, cfg.search.space, cfg.search.budget, seed);
    }
    if (algorithm == "evolution") {
        return regularized_evolution(oracle, cfg.objective, cfg.search.space, cfg.search.budget,
                                     cfg.evolution_population, cfg.evolution_sample_size, seed);
    }
    if (algorithm == "gp_bo") {
        return gp_bo_search(oracle, cfg.objective, cfg.search, cfg.gp_distance, seed);
    }
    throw std::runtime_error("unknown algorithm: " + algorithm);
}

int run_experiment(const ExperimentConfig& cfg) {
    try {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.output_dir);
        const BenchmarkOracle base_oracle = make_oracle(cfg);

        {
            std::ofstream provenance(fs::path(cfg.output_dir) / "resolved_config.txt");
            provenance << render_config(cfg, base_oracle.version());
        }

        // per-algorithm best-so-far trajectories for the summary
        std::map<std::string, std::vector<std::vector<double>>> trajectories;

        for (const auto& algorithm : cfg.algorithms) {
            std::ofstream csv(fs::path(cfg.output_dir) / (algorithm + ".csv"));
            csv << "trial,query,observed,best_so_far,test_error_of_best\n";
            auto& trajs = trajectories[algorithm];

            for (int trial = 0; trial < cfg.trials; trial += cfg.workers) {
                const int block = std::min(cfg.workers, cfg.trials - trial);
                std::vector<std::future<TrialRecord>> futures;
                futures.reserve(block);
                for (int b = 0; b < block; ++b) {
                    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial + b);
                    futures.push_back(std::async(
                        block > 1 ? std::launch::async : std::launch::deferred,
                        [&cfg, &algorithm, &base_oracle, seed] {
                            return run_one(cfg, algorithm, base_oracle, seed);
                        }));
                }
                for (int b = 0; b < block; ++b) {
                    const TrialRecord record = futures[b].get();
                    std::vector<double> best;
                    best.reserve(record.entries.size());
                    char buf[128];
                    for (const auto& e : record.entries) {
                        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", trial + b,
                                      e.index, e.observed, e.best_so_far, e.test_error_of_best);
                        csv << buf;
                        best.push_back(e.best_so_far);
                    }
                    csv.flush();  // partial results survive an interrupted run
                    trajs.push_back(std::move(best));
                    std::cout << algorithm << " trial " << trial + b << ": best "
                              << trajs.back().back() << "\n";
                }
            }
        }

        {
            // companion script; the CSVs are the actual interface
            std::ofstream plot(fs::path(cfg.output_dir) / "plot_summary.gp");
            plot << "set datafile separator ','\n"
                 << "set key autotitle columnheader\n"
                 << "set xlabel 'queries'\n"
                 << "set ylabel 'mean best observed'\n"
                 << "plot ";
            for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
                if (i) {
                    plot << ", ";
                }
                plot << "'summary.csv' using 2:(strcol(1) eq '" << cfg.algorithms[i]
                     << "' ? $3 : 1/0) with linespoints title '" << cfg.algorithms[i] << "'";
            }
            plot << "\n";
        }

        std::ofstream summary(fs::path(cfg.output_dir) / "summary.csv");
        summary << "algorithm,query,mean_best,std_best\n";
        std::vector<int> checkpoints;
        for (int q = 10; q <= cfg.search.budget; q += 10) {
            checkpoints.push_back(q);
        }
        if (checkpoints.empty() || checkpoints.back() != cfg.search.budget) {
            checkpoints.push_back(cfg.search.budget);
        }
        for (const auto& algorithm : cfg.algorithms) {
            const auto& trajs = trajectories[algorithm];
            for (int q : checkpoints) {
                double mean = 0.0;
                int n = 0;
                for (const auto& t : trajs) {
                    if (q <= static_cast<int>(t.size())) {
                        mean += t[q - 1];
                        ++n;
                    }
                }
                if (n == 0) {
                    continue;
                }
                mean /= n;
                double ss = 0.0;
                for (const auto& t : trajs) {
                    if (q <= static_cast<int>(t.size())) {
                        ss += (t[q - 1] - mean) * (t[q - 1] - mean);
                    }
                }
                const double stddev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
                char buf[128];
                std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g\n", algorithm.c_str(), q, mean,
                              stddev);
                summary << buf;
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace nasbo
