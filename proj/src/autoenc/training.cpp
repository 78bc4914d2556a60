#include "tabclust/autoenc/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::autoenc {

namespace {

bool all_finite(const numkit::ParamViews& params) {
    for (auto p : params) {
        for (double v : p) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<EpochLoss> run_minibatch_training(const numkit::ParamViews& params, std::size_t n_rows,
                                              const TrainLoopOptions& options, numkit::Rng& rng,
                                              const EpochHook& before_epoch, const BatchStep& step) {
    if (n_rows == 0) throw InvalidArgument("training: no rows");
    if (options.batch_size == 0) throw InvalidArgument("training: batch size must be positive");
    const std::size_t batch = std::min(options.batch_size, n_rows);

    numkit::AdamConfig adam = options.adam;
    numkit::OptimizerState state;
    std::vector<std::size_t> order(n_rows);
    std::vector<EpochLoss> history;
    history.reserve(options.epochs);

    std::vector<std::vector<double>> snapshot(params.size());
    numkit::OptimizerState state_snapshot;
    std::size_t halvings = 0;
    numkit::GradViews grads;

    for (std::size_t epoch = 0; epoch < options.epochs;) {
        for (std::size_t g = 0; g < params.size(); ++g) snapshot[g].assign(params[g].begin(), params[g].end());
        state_snapshot = state;

        if (before_epoch) before_epoch(epoch);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(order));

        EpochLoss acc;
        bool diverged = false;
        for (std::size_t start = 0; start < n_rows; start += batch) {
            const std::size_t len = std::min(batch, n_rows - start);
            grads.clear();
            const EpochLoss l = step(std::span<const std::size_t>(order.data() + start, len), grads);
            if (!std::isfinite(l.total)) {
                diverged = true;
                break;
            }
            numkit::adam_step(params, grads, state, adam);
            acc.recon += l.recon;
            acc.cluster += l.cluster;
            acc.total += l.total;
        }
        if (!diverged && !all_finite(params)) diverged = true;

        if (diverged) {
            for (std::size_t g = 0; g < params.size(); ++g) {
                std::copy(snapshot[g].begin(), snapshot[g].end(), params[g].begin());
            }
            state = state_snapshot;
            if (++halvings > options.max_lr_halvings) {
                throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch + 1) + " after " +
                                       std::to_string(options.max_lr_halvings) + " learning-rate halvings");
            }
            adam.lr *= 0.5;
            continue;
        }
        history.push_back(acc);
        ++epoch;
    }
    return history;
}

}  // namespace tabclust::autoenc
