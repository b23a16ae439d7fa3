#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "nasbo/arch_space.hpp"

namespace nasbo {

enum class QueryMode { MeanValidation, RandomValidation };

struct ArchMetrics {
    std::array<double, 3> val_errors{};  // one per training seed
    double test_error = 0.0;
    double n_params = 0.0;
};

/// Stands in for "train this architecture and report validation error":
/// either a tabular lookup keyed by canonical cell form, or a deterministic
/// synthetic surrogate defined on the cell's path set.
///
/// query() increments the query counter atomically; metrics() does not count.
/// Copying an oracle yields an independent counter over the same ground
/// truth, which is how per-trial instances are made.
class BenchmarkOracle {
  public:
    /// Line-delimited records:
    ///   {"cell": "<canonical text>", "val": [e1,e2,e3], "test": e, "params": p}
    /// Throws std::runtime_error naming the offending line on parse errors,
    /// duplicate keys, or missing fields.
    static BenchmarkOracle load_tabular(const std::string& path);

    /// Deterministic surrogate; see README for the pinned construction.
    static BenchmarkOracle synthetic(const SpaceParams& space, std::uint64_t seed);

    BenchmarkOracle(const BenchmarkOracle& other);
    BenchmarkOracle& operator=(const BenchmarkOracle& other);

    /// Observed value under the current mode. Counts one query.
    double query(const Cell& cell);

    /// Full metrics without counting a query.
    ArchMetrics metrics(const Cell& cell) const;

    double test_error(const Cell& cell) const { return metrics(cell).test_error; }
    double n_params(const Cell& cell) const { return metrics(cell).n_params; }

    void set_mode(QueryMode mode) { mode_ = mode; }
    QueryMode mode() const { return mode_; }

    /// RandomValidation picks are derived from (run_seed, query index).
    void set_run_seed(std::uint64_t seed) { run_seed_ = seed; }

    /// -1 disables the cap. Queries past the cap throw and report the overage.
    void set_budget(long long cap) { budget_ = cap; }

    long long query_count() const { return count_.load(); }

    std::string version() const;

    const SpaceParams& space() const { return space_; }

    bool params_available() const { return true; }

    std::size_t table_size() const { return lookup_ ? lookup_->size() : 0; }

  private:
    BenchmarkOracle() = default;

    ArchMetrics synthetic_metrics(const Cell& cell) const;

    bool synthetic_ = false;
    std::uint64_t truth_seed_ = 0;
    std::uint64_t run_seed_ = 0;
    SpaceParams space_;
    std::shared_ptr<const std::map<std::string, ArchMetrics>> lookup_;
    QueryMode mode_ = QueryMode::MeanValidation;
    long long budget_ = -1;
    std::atomic<long long> count_{0};
};

}  // namespace nasbo
