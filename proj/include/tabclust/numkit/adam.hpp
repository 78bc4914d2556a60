#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tabclust::numkit {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct OptimizerState {
    std::uint64_t step_count = 0;
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;
};

using ParamViews = std::vector<std::span<double>>;
using GradViews = std::vector<std::span<const double>>;

// Bias-corrected Adam update. Moment buffers are allocated on the first call
// and must stay congruent with `params` afterwards.
void adam_step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
               OptimizerState& state, const AdamConfig& config);

}  // namespace tabclust::numkit
