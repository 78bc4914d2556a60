// Command-line front end for the benchmark harness.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "tabclust/benchcli/config.hpp"
#include "tabclust/benchcli/runner.hpp"
#include "tabclust/benchcli/tables.hpp"
#include "tabclust/dataio/synth.hpp"
#include "tabclust/errors.hpp"

namespace {

using namespace tabclust;

int run(const std::string& config_path, bool resume, std::optional<std::size_t> max_units) {
    const auto config = bench::load_config(config_path);
    bench::RunOptions opts;
    opts.resume = resume;
    opts.max_units = max_units;
    opts.log = &std::cerr;
    const auto summary = bench::run_benchmark(config, opts);
    std::cerr << summary.units_run << " units run, " << summary.units_skipped << " already done, "
              << summary.units_failed << " failed\n";
    if (summary.exit_code == bench::kExitOk && !summary.interrupted) {
        std::cout << std::ifstream(config.output_dir / "accuracy_table.md").rdbuf();
        std::cout << '\n' << std::ifstream(config.output_dir / "rank_table.md").rdbuf();
    }
    return summary.exit_code;
}

int gen_synth(const std::string& out, std::size_t n, std::size_t dim, std::size_t k, double sep, double sigma,
              std::uint64_t seed) {
    numkit::Rng rng(seed);
    auto ds = data::synth_blobs(n, dim, k, sep, sigma, rng);
    const std::filesystem::path csv(out);
    ds.name = csv.stem().string();
    data::write_csv(ds, csv);
    data::DatasetManifest m;
    m.name = ds.name;
    m.path = csv.filename();
    m.label_column = "label";
    m.expected_n = n;
    m.expected_dim = dim;
    m.expected_classes = k;
    auto manifest_path = csv;
    manifest_path.replace_extension(".json");
    std::ofstream(manifest_path) << data::manifest_to_json(m).dump(2) << '\n';
    std::cerr << "wrote " << csv.string() << " and " << manifest_path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep embedding clustering benchmark for tabular data"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::size_t> max_units;
    auto* run_cmd = app.add_subcommand("run", "Run a benchmark from scratch");
    run_cmd->add_option("--config", config_path, "Benchmark config (JSON)")->required();
    run_cmd->add_option("--max-units", max_units, "Stop after this many units");
    auto* resume_cmd = app.add_subcommand("resume", "Continue a benchmark, skipping finished units");
    resume_cmd->add_option("--config", config_path, "Benchmark config (JSON)")->required();
    resume_cmd->add_option("--max-units", max_units, "Stop after this many units");

    std::string results_dir;
    auto* report_cmd = app.add_subcommand("report", "Rebuild the tables from results.csv");
    report_cmd->add_option("--results", results_dir, "Benchmark output directory")->required();

    std::string out;
    std::size_t n = 0, dim = 0, k = 0;
    double sep = 0.0, sigma = 1.0;
    std::uint64_t seed = 0;
    auto* synth_cmd = app.add_subcommand("gen-synth", "Write a Gaussian-blob CSV and its manifest");
    synth_cmd->add_option("--out", out, "CSV path")->required();
    synth_cmd->add_option("--n", n, "Rows")->required();
    synth_cmd->add_option("--dim", dim, "Features")->required();
    synth_cmd->add_option("--k", k, "Classes")->required();
    synth_cmd->add_option("--sep", sep, "Minimum distance between centres")->required();
    synth_cmd->add_option("--sigma", sigma, "Blob standard deviation")->capture_default_str();
    synth_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();

    auto* validate_cmd = app.add_subcommand("validate-config", "Check a config without running it");
    validate_cmd->add_option("--config", config_path, "Benchmark config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run(config_path, false, max_units);
        if (*resume_cmd) return run(config_path, true, max_units);
        if (*report_cmd) {
            const auto paths = bench::emit_tables(results_dir);
            std::cout << std::ifstream(paths.accuracy_md).rdbuf() << '\n' << std::ifstream(paths.rank_md).rdbuf();
            return 0;
        }
        if (*synth_cmd) return gen_synth(out, n, dim, k, sep, sigma, seed);
        if (*validate_cmd) {
            const auto config = bench::load_config(config_path);
            std::cout << "ok: " << config.datasets.size() << " datasets, " << config.methods.size()
                      << " methods, fingerprint " << config.fingerprint() << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return bench::kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return bench::kExitData;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bench::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
