#include "nasbo/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "nasbo/gp.hpp"

namespace nasbo {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Observation {
    Cell cell;
    double value;
};

void append_entry(TrialRecord& record, const Cell& cell, double observed, double test_error,
                  double wall_ms) {
    TrialEntry entry;
    entry.index = static_cast<int>(record.entries.size());
    entry.cell_text = cell_to_text(cell);
    entry.observed = observed;
    const double prev_best =
        record.entries.empty() ? std::numeric_limits<double>::infinity()
                               : record.entries.back().best_so_far;
    entry.best_so_far = std::min(prev_best, observed);
    entry.test_error_of_best =
        observed <= prev_best || record.entries.empty()
            ? test_error
            : record.entries.back().test_error_of_best;
    entry.wall_ms = wall_ms;
    record.entries.push_back(std::move(entry));
}

/// Shared loop body for the two surrogate-based searches. The surrogate
/// callback receives the observations and candidates and returns one score
/// per candidate (lower is better).
template <typename ScoreFn>
TrialRecord surrogate_bo_loop(BenchmarkOracle& oracle, const Objective& objective,
                              const SearchConfig& cfg, std::uint64_t seed,
                              const std::string& algorithm, ScoreFn&& score_candidates) {
    if (cfg.t0 > cfg.budget) {
        throw std::invalid_argument(algorithm + ": t0 must not exceed the budget");
    }
    if (cfg.batch_k < 1 || cfg.candidates_per_iter < cfg.batch_k) {
        throw std::invalid_argument(algorithm + ": need 1 <= k <= c");
    }
    const auto start = Clock::now();
    Rng rng(seed);
    TrialRecord record;
    record.algorithm = algorithm;
    record.seed = seed;

    std::vector<Observation> obs;
    std::unordered_set<std::string> seen;
    auto mark_seen = [&](const Cell& cell) {
        if (cfg.dedup) {
            seen.insert(canonical_form(cell, cfg.space));
        }
    };
    auto is_seen = [&](const Cell& cell) {
        return cfg.dedup && seen.count(canonical_form(cell, cfg.space)) > 0;
    };

    auto evaluate = [&](const Cell& cell) {
        const double value = objective.evaluate(oracle, cell);
        obs.push_back({cell, value});
        mark_seen(cell);
        append_entry(record, cell, value, oracle.test_error(cell), elapsed_ms(start));
    };

    // initial random draws
    for (int i = 0; i < cfg.t0; ++i) {
        Cell cell = random_spec(cfg.space, rng);
        for (int attempt = 0; attempt < 1'000'000 && is_seen(cell); ++attempt) {
            cell = random_spec(cfg.space, rng);
        }
        evaluate(cell);
    }

    while (static_cast<int>(record.entries.size()) < cfg.budget) {
        // elites: best observed values, earlier queries win ties
        std::vector<std::size_t> rank(obs.size());
        std::iota(rank.begin(), rank.end(), 0);
        std::stable_sort(rank.begin(), rank.end(),
                         [&](std::size_t a, std::size_t b) { return obs[a].value < obs[b].value; });
        const int n_elites = std::min<int>(cfg.elites, static_cast<int>(rank.size()));

        const int want = cfg.candidate_gen == CandidateGen::Mutation ? cfg.candidates_per_iter
                                                                     : cfg.random_pool;
        std::vector<Cell> candidates;
        std::unordered_set<std::string> cand_seen;
        auto try_add = [&](const Cell& cell) {
            if (is_seen(cell)) {
                return;
            }
            if (cfg.dedup) {
                std::string key = canonical_form(cell, cfg.space);
                if (!cand_seen.insert(std::move(key)).second) {
                    return;
                }
            }
            candidates.push_back(cell);
        };

        if (cfg.candidate_gen == CandidateGen::Mutation) {
            const long long max_attempts = 50LL * want;
            for (long long attempt = 0;
                 attempt < max_attempts && static_cast<int>(candidates.size()) < want; ++attempt) {
                const auto& parent = obs[rank[attempt % n_elites]].cell;  // round-robin
                try_add(mutate(parent, cfg.space, cfg.mutation_rate, rng));
            }
        } else {
            const long long max_attempts = 50LL * want;
            for (long long attempt = 0;
                 attempt < max_attempts && static_cast<int>(candidates.size()) < want; ++attempt) {
                try_add(random_spec(cfg.space, rng));
            }
        }
        // starvation fallback: fill with fresh random draws
        for (long long attempt = 0;
             attempt < 1'000'000 && static_cast<int>(candidates.size()) < want; ++attempt) {
            try_add(random_spec(cfg.space, rng));
        }
        if (candidates.empty()) {
            // space exhausted under dedup; accept repeats to honor the budget
            candidates.push_back(random_spec(cfg.space, rng));
        }

        const double y_min =
            std::min_element(obs.begin(), obs.end(), [](const auto& a, const auto& b) {
                return a.value < b.value;
            })->value;
        const std::vector<double> scores = score_candidates(obs, candidates, y_min, rng);

        const int remaining = cfg.budget - static_cast<int>(record.entries.size());
        const std::size_t k =
            static_cast<std::size_t>(std::min({cfg.batch_k, remaining,
                                               static_cast<int>(candidates.size())}));
        for (std::size_t idx : select_batch(scores, k)) {
            evaluate(candidates[idx]);
        }
    }
    return record;
}

std::vector<std::vector<double>> encode_all(const std::vector<Cell>& cells,
                                            const EncodingSpec& spec, const PathTable& table) {
    std::vector<std::vector<double>> out;
    out.reserve(cells.size());
    for (const auto& cell : cells) {
        out.push_back(encode(cell, spec, table));
    }
    return out;
}

}  // namespace

double dual_objective(double val_loss, double n_params, const DualObjectiveConfig& cfg) {
    if (n_params < 0.0) {
        throw std::invalid_argument("dual_objective: n_params must be nonnegative");
    }
    return (val_loss - cfg.loss_lb) * std::pow(n_params, cfg.exponent);
}

double Objective::evaluate(BenchmarkOracle& oracle, const Cell& cell) const {
    const double value = oracle.query(cell);
    if (kind == Kind::Validation) {
        return value;
    }
    return dual_objective(value, oracle.n_params(cell), dual);
}

std::string TrialRecord::data_fingerprint() const {
    std::string out = algorithm + ":" + std::to_string(seed) + "\n";
    char buf[96];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,", e.index, e.observed,
                      e.best_so_far, e.test_error_of_best);
        out += buf;
        out += e.cell_text;
        out += "\n";
    }
    return out;
}

TrialRecord ensemble_bo_search(BenchmarkOracle& oracle, const Objective& objective,
                               const SearchConfig& cfg, std::uint64_t seed) {
    const PathTable table = enumerate_paths(cfg.space);
    PredictorConfig predictor = cfg.predictor;
    predictor.ensemble_size = cfg.ensemble_size;

    int iteration = 0;
    auto score = [&](const std::vector<Observation>& obs, const std::vector<Cell>& candidates,
                     double y_min, Rng& rng) {
        std::vector<std::vector<double>> x;
        std::vector<double> y;
        x.reserve(obs.size());
        y.reserve(obs.size());
        for (const auto& o : obs) {
            x.push_back(encode(o.cell, cfg.encoding, table));
            y.push_back(o.value);
        }
        const std::uint64_t base = hash_combine(seed, 0x5151 + static_cast<std::uint64_t>(iteration));
        ++iteration;
        const EnsembleModel model = train_ensemble(x, y, predictor, base);

        AcqContext ctx = cfg.acquisition;
        ctx.y_min = y_min;
        std::vector<double> scores;
        scores.reserve(candidates.size());
        for (const auto& cand : candidates) {
            const auto vec = encode(cand, cfg.encoding, table);
            const auto [mean, stddev] = ensemble_stats(model, vec);
            scores.push_back(acquisition_score(ctx, mean, stddev, &model, vec, rng));
        }
        return scores;
    };
    return surrogate_bo_loop(oracle, objective, cfg, seed, "ensemble_bo", score);
}

TrialRecord random_search(BenchmarkOracle& oracle, const Objective& objective,
                          const SpaceParams& space, int budget, std::uint64_t seed) {
    const auto start = Clock::now();
    Rng rng(seed);
    TrialRecord record;
    record.algorithm = "random";
    record.seed = seed;
    for (int i = 0; i < budget; ++i) {
        const Cell cell = random_spec(space, rng);
        const double value = objective.evaluate(oracle, cell);
        append_entry(record, cell, value, oracle.test_error(cell), elapsed_ms(start));
    }
    return record;
}

TrialRecord regularized_evolution(BenchmarkOracle& oracle, const Objective& objective,
                                  const SpaceParams& space, int budget, int population,
                                  int sample_size, std::uint64_t seed) {
    if (population < 2 || sample_size < 1 || sample_size > population) {
        throw std::invalid_argument("regularized_evolution: need P >= 2 and 1 <= S <= P");
    }
    const auto start = Clock::now();
    Rng rng(seed);
    TrialRecord record;
    record.algorithm = "evolution";
    record.seed = seed;

    struct Member {
        Cell cell;
        double value;
    };
    std::vector<Member> pop;
    for (int i = 0; i < std::min(population, budget); ++i) {
        Cell cell = random_spec(space, rng);
        const double value = objective.evaluate(oracle, cell);
        pop.push_back({cell, value});
        append_entry(record, cell, value, oracle.test_error(cell), elapsed_ms(start));
    }
    while (static_cast<int>(record.entries.size()) < budget) {
        // tournament: S uniform picks with replacement, best wins
        std::size_t best = rng.uniform_int(pop.size());
        for (int s = 1; s < sample_size; ++s) {
            const std::size_t pick = rng.uniform_int(pop.size());
            if (pop[pick].value < pop[best].value) {
                best = pick;
            }
        }
        const Cell child = mutate(pop[best].cell, space, 1.0, rng);
        const double value = objective.evaluate(oracle, child);
        pop.push_back({child, value});
        pop.erase(pop.begin());  // age out the oldest
        append_entry(record, child, value, oracle.test_error(child), elapsed_ms(start));
    }
    return record;
}

TrialRecord gp_bo_search(BenchmarkOracle& oracle, const Objective& objective,
                         const SearchConfig& cfg, GpDistance distance, std::uint64_t seed) {
    const PathTable table = enumerate_paths(cfg.space);
    const EncodingSpec enc_spec{distance == GpDistance::AdjacencyHamming
                                    ? EncodingKind::Adjacency
                                    : EncodingKind::Path,
                                std::nullopt};

    auto score = [&](const std::vector<Observation>& obs, const std::vector<Cell>& candidates,
                     double /*y_min*/, Rng& /*rng*/) {
        std::vector<Cell> cells;
        cells.reserve(obs.size());
        std::vector<double> y;
        y.reserve(obs.size());
        for (const auto& o : obs) {
            cells.push_back(o.cell);
            y.push_back(o.value);
        }
        HammingGp gp;
        gp.fit(encode_all(cells, enc_spec, table), y);

        std::vector<double> scores;
        scores.reserve(candidates.size());
        for (const auto& cand : encode_all(candidates, enc_spec, table)) {
            const auto [mu, var] = gp.predict(cand);
            scores.push_back(mu - cfg.acquisition.beta * std::sqrt(var));
        }
        return scores;
    };
    const std::string name = distance == GpDistance::AdjacencyHamming ? "gp_bo_adjacency"
                                                                      : "gp_bo_path";
    return surrogate_bo_loop(oracle, objective, cfg, seed, name, score);
}

}  // namespace nasbo
