#pragma once

#include <cstddef>
#include <optional>
#include <ostream>

#include "tabclust/benchcli/config.hpp"

namespace tabclust::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitTraining = 4;

struct RunOptions {
    bool resume = false;
    // Stop after this many units (simulates an interruption).
    std::optional<std::size_t> max_units;
    std::ostream* log = nullptr;
};

struct RunSummary {
    std::size_t units_total = 0;
    std::size_t units_skipped = 0;  // already done in the ledger
    std::size_t units_run = 0;
    std::size_t units_failed = 0;   // failed units remaining in the ledger
    bool interrupted = false;
    int exit_code = kExitOk;
};

/// Runs every (dataset, method, fold, candidate) unit not yet done, then
/// writes results.csv and the tables into config.output_dir.
///
/// Datasets run one after another; units of a dataset run on a worker pool.
/// Every number written is independent of the thread count. Throws
/// ConfigError or DataError for setup problems; training failures are
/// recorded and reported through exit_code.
RunSummary run_benchmark(const BenchmarkConfig& config, const RunOptions& options = {});

}  // namespace tabclust::bench
