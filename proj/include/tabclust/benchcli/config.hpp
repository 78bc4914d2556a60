#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabclust/dataio/dataset.hpp"
#include "tabclust/embedcluster/trainers.hpp"
#include "tabclust/evalkit/protocol.hpp"

namespace tabclust::bench {

struct SynthSource {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::size_t k = 0;
    double separation = 0.0;
    double sigma = 1.0;
    std::uint64_t seed = 0;
};

// Exactly one of manifest / synth is set.
struct DatasetSource {
    std::string name;
    std::optional<data::DatasetManifest> manifest;
    std::optional<SynthSource> synth;
};

/// Benchmark configuration, read from JSON.
///
/// Required: datasets, methods. Every other field has a default. A dataset
/// entry is a manifest path, an inline manifest object, or
/// {"name": ..., "synthetic": {"n", "dim", "k", "separation", "sigma", "seed"}}.
/// Relative paths resolve against the config file's directory. Unknown keys
/// are rejected.
struct BenchmarkConfig {
    std::vector<DatasetSource> datasets;
    std::vector<eval::MethodId> methods;
    std::vector<double> gamma_grid{0.01, 0.1, 1.0};
    std::size_t epochs = 1000;
    std::size_t pretrain_epochs = 200;
    std::uint64_t seed = 0;
    std::size_t parallelism = 1;
    std::filesystem::path output_dir = "bench_out";

    std::size_t batch_size = 256;
    double learning_rate = 1e-3;
    std::size_t p_update_interval = 5;
    double dkm_inv_temperature = 10.0;
    bool dkm_anneal = false;
    std::size_t kmeans_restarts = 10;
    std::size_t depict_pad_to = 0;
    bool stratified_folds = false;
    bool allow_size_mismatch = false;
    bool write_histories = true;

    // Throws ConfigError.
    void validate() const;

    // Normalised form; parallelism and output_dir are left out so they never
    // change the fingerprint.
    nlohmann::json to_json() const;
    std::string fingerprint() const;
};

BenchmarkConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
BenchmarkConfig load_config(const std::filesystem::path& path);

// Effective parallelism: BENCH_THREADS when set, else config.parallelism.
std::size_t effective_parallelism(const BenchmarkConfig& config);

// One MethodConfig per gamma (a single entry for methods without gamma).
std::vector<embed::MethodConfig> candidate_grid(const BenchmarkConfig& config, eval::MethodId method);

eval::ProtocolOptions protocol_options(const BenchmarkConfig& config);

}  // namespace tabclust::bench
