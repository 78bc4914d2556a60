#include "tabclust/benchcli/runner.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "tabclust/benchcli/ledger.hpp"
#include "tabclust/benchcli/tables.hpp"
#include "tabclust/dataio/synth.hpp"
#include "tabclust/embedcluster/history.hpp"
#include "tabclust/errors.hpp"
#include "tabclust/numkit/format.hpp"

namespace tabclust::bench {

namespace fs = std::filesystem;

namespace {

struct Unit {
    std::size_t method = 0;  // index into config.methods
    std::size_t fold = 0;
    std::size_t candidate = 0;
};

data::Dataset load_source(const DatasetSource& src, const BenchmarkConfig& config) {
    if (src.synth) {
        const auto& s = *src.synth;
        numkit::Rng rng(s.seed);
        try {
            auto ds = data::synth_blobs(s.n, s.dim, s.k, s.separation, s.sigma, rng);
            ds.name = src.name;
            return ds;
        } catch (const InvalidArgument& e) {
            throw DataError("synthetic dataset '" + src.name + "': " + e.what());
        }
    }
    data::LoadOptions lo;
    lo.allow_size_mismatch = config.allow_size_mismatch;
    return data::load_csv(*src.manifest, lo);
}

class Logger {
public:
    explicit Logger(std::ostream* out) : out_(out) {}
    void line(const std::string& s) {
        if (out_ == nullptr) return;
        std::lock_guard lock(mutex_);
        *out_ << s << '\n' << std::flush;
    }

private:
    std::ostream* out_;
    std::mutex mutex_;
};

std::string history_stem(const std::string& dataset, const std::string& method, std::size_t fold,
                         std::size_t candidate) {
    return dataset + "_" + method + "_fold" + std::to_string(fold) + "_cand" + std::to_string(candidate);
}

}  // namespace

RunSummary run_benchmark(const BenchmarkConfig& config, const RunOptions& options) {
    config.validate();
    const std::size_t threads = effective_parallelism(config);
    Logger log(options.log);

    std::vector<data::Dataset> datasets;
    for (const auto& src : config.datasets) datasets.push_back(load_source(src, config));

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + config.output_dir.string() + "': " + ec.message());
    const fs::path history_dir = config.output_dir / "histories";
    if (config.write_histories) fs::create_directories(history_dir, ec);

    const fs::path ledger_path = config.output_dir / "ledger.jsonl";
    RunLedger ledger = options.resume ? RunLedger::resume(ledger_path, config.fingerprint())
                                      : RunLedger::create(ledger_path, config.fingerprint());

    std::vector<std::vector<embed::MethodConfig>> grids;
    for (auto m : config.methods) grids.push_back(eval::effective_grid(m, candidate_grid(config, m)));
    eval::ProtocolOptions popts = protocol_options(config);

    RunSummary summary;
    std::vector<eval::ProtocolPlan> plans;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        const data::Dataset& ds = datasets[d];
        numkit::Rng rng(config.seed);
        eval::ProtocolPlan plan;
        std::vector<eval::FoldData> folds;
        try {
            plan = eval::plan_protocol(ds, rng, config.stratified_folds);
            for (std::size_t f = 0; f < eval::kFoldCount; ++f) folds.push_back(eval::prepare_fold(ds, plan.folds, f));
        } catch (const InvalidArgument& e) {
            throw DataError("dataset '" + ds.name + "': " + e.what());
        }
        plans.push_back(plan);

        std::vector<Unit> pending;
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            const std::string method(eval::to_string(config.methods[m]));
            for (std::size_t f = 0; f < eval::kFoldCount; ++f) {
                for (std::size_t c = 0; c < grids[m].size(); ++c) {
                    ++summary.units_total;
                    const auto rec = ledger.find(ds.name, method, f, c);
                    if (rec && rec->status == UnitStatus::done) {
                        ++summary.units_skipped;
                        continue;
                    }
                    pending.push_back({m, f, c});
                }
            }
        }
        if (options.max_units) {
            const std::size_t budget = *options.max_units > summary.units_run ? *options.max_units - summary.units_run : 0;
            if (pending.size() > budget) {
                pending.resize(budget);
                summary.interrupted = true;
            }
        }

        autoenc::PretrainCache cache;
        popts.cache = &cache;
        std::atomic<std::size_t> next{0};
        const auto worker = [&] {
            for (std::size_t i = next++; i < pending.size(); i = next++) {
                const Unit& u = pending[i];
                const eval::MethodId method = config.methods[u.method];
                const auto& candidate = grids[u.method][u.candidate];
                UnitRecord rec;
                rec.dataset = ds.name;
                rec.method = std::string(eval::to_string(method));
                rec.fold = u.fold;
                rec.candidate = u.candidate;
                rec.seed = plan.fold_seed(u.fold);
                if (eval::uses_gamma(method)) rec.gamma = candidate.gamma;
                try {
                    const auto outcome = eval::evaluate_candidate(method, folds[u.fold], candidate, rec.seed, popts);
                    rec.status = UnitStatus::done;
                    rec.train_accuracy = outcome.train_accuracy;
                    rec.test_accuracy = outcome.test_accuracy;
                    rec.depict_fallback = outcome.depict_fallback;
                    if (config.write_histories && eval::is_deep(method)) {
                        const auto stem = history_stem(rec.dataset, rec.method, u.fold, u.candidate);
                        embed::write_history_csv(history_dir / (stem + ".csv"), outcome.history);
                        embed::write_history_csv(history_dir / (stem + "_pretrain.csv"), outcome.pretrain_history);
                    }
                } catch (const std::exception& e) {
                    rec.status = UnitStatus::failed;
                    rec.error = e.what();
                }
                ledger.append(rec);
                log.line("[" + to_string(rec.status) + "] " + rec.dataset + " " + rec.method + " fold " +
                         std::to_string(u.fold) + " candidate " + std::to_string(u.candidate) +
                         (rec.status == UnitStatus::done
                              ? " train " + numkit::format_fixed1(rec.train_accuracy) + " test " +
                                    numkit::format_fixed1(rec.test_accuracy)
                              : ": " + rec.error));
            }
        };
        const std::size_t n_threads = std::min(threads, pending.size());
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        }
        summary.units_run += pending.size();
        if (summary.interrupted) break;
    }
    popts.cache = nullptr;

    if (summary.interrupted) {
        log.line("stopped after " + std::to_string(summary.units_run) + " units; resume to continue");
        return summary;
    }

    std::vector<ResultRow> rows;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        const std::string& name = datasets[d].name;
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            const eval::MethodId method = config.methods[m];
            const std::string method_name(eval::to_string(method));
            for (std::size_t f = 0; f < eval::kFoldCount; ++f) {
                std::vector<std::optional<double>> scores;
                std::vector<double> tests;
                for (std::size_t c = 0; c < grids[m].size(); ++c) {
                    const auto rec = ledger.find(name, method_name, f, c);
                    if (rec && rec->status == UnitStatus::done) {
                        scores.push_back(rec->train_accuracy);
                        tests.push_back(rec->test_accuracy);
                    } else {
                        ++summary.units_failed;
                        scores.push_back(std::nullopt);
                        tests.push_back(0.0);
                    }
                }
                const auto best = eval::select_candidate(scores);
                if (!best) continue;
                ResultRow row;
                row.dataset = name;
                row.method = method_name;
                row.fold = f;
                row.accuracy = tests[*best];
                if (eval::uses_gamma(method)) row.chosen_gamma = grids[m][*best].gamma;
                row.seed = plans[d].fold_seed(f);
                rows.push_back(row);
            }
        }
    }
    write_results_csv(config.output_dir / "results.csv", rows);
    if (summary.units_failed > 0) {
        summary.exit_code = kExitTraining;
        log.line(std::to_string(summary.units_failed) + " units failed; see ledger.jsonl");
        try {
            emit_tables(config.output_dir);
        } catch (const DataError& e) {
            log.line(std::string("tables not written: ") + e.what());
        }
        return summary;
    }
    emit_tables(config.output_dir);
    return summary;
}

}  // namespace tabclust::bench
