#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tabclust/numkit/adam.hpp"
#include "tabclust/numkit/rng.hpp"

namespace tabclust::autoenc {

// Sum-form losses accumulated over one epoch (or one batch).
struct EpochLoss {
    double recon = 0.0;
    double cluster = 0.0;
    double total = 0.0;
};

struct TrainLoopOptions {
    std::size_t epochs = 1;
    std::size_t batch_size = 256;  // clipped to the row count (full batch)
    numkit::AdamConfig adam;
    std::size_t max_lr_halvings = 3;
};

// Computes the batch loss (sum form) and fills `grads` congruent with the
// trained parameters, already scaled for the mean-over-batch objective.
using BatchStep = std::function<EpochLoss(std::span<const std::size_t> rows, numkit::GradViews& grads)>;
using EpochHook = std::function<void(std::size_t epoch)>;

/// Shuffled minibatch Adam over `n_rows` rows.
///
/// Divergence guard: a non-finite batch loss or parameter restores the
/// snapshot taken at the start of the epoch (parameters and optimizer state),
/// halves the learning rate and reruns the epoch. More than
/// `max_lr_halvings` halvings throws TrainingDiverged.
std::vector<EpochLoss> run_minibatch_training(const numkit::ParamViews& params, std::size_t n_rows,
                                              const TrainLoopOptions& options, numkit::Rng& rng,
                                              const EpochHook& before_epoch, const BatchStep& step);

}  // namespace tabclust::autoenc
