#include "tabclust/numkit/adam.hpp"

#include <cmath>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::numkit {

void adam_step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
               OptimizerState& state, const AdamConfig& config) {
    if (params.size() != grads.size()) throw DimensionMismatch("adam_step: parameter/gradient group counts differ");
    if (!(config.lr > 0.0)) throw InvalidArgument("adam_step: learning rate must be positive");
    if (state.step_count == 0 && state.first_moment.empty()) {
        state.first_moment.resize(params.size());
        state.second_moment.resize(params.size());
        for (std::size_t g = 0; g < params.size(); ++g) {
            state.first_moment[g].assign(params[g].size(), 0.0);
            state.second_moment[g].assign(params[g].size(), 0.0);
        }
    }
    if (state.first_moment.size() != params.size()) throw DimensionMismatch("adam_step: state has wrong group count");
    for (std::size_t g = 0; g < params.size(); ++g) {
        if (params[g].size() != grads[g].size() || state.first_moment[g].size() != params[g].size()) {
            throw DimensionMismatch("adam_step: group " + std::to_string(g) + " is not congruent");
        }
    }

    ++state.step_count;
    const double t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(config.beta1, t);
    const double c2 = 1.0 - std::pow(config.beta2, t);
    for (std::size_t g = 0; g < params.size(); ++g) {
        auto p = params[g];
        auto gr = grads[g];
        auto& m = state.first_moment[g];
        auto& v = state.second_moment[g];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * gr[i];
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * gr[i] * gr[i];
            const double mhat = m[i] / c1;
            const double vhat = v[i] / c2;
            p[i] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
        }
    }
}

}  // namespace tabclust::numkit
