#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tabclust/numkit/matrix.hpp"
#include "tabclust/numkit/rng.hpp"

namespace tabclust::numkit {

enum class Activation { linear, sigmoid };

std::string_view to_string(Activation a) noexcept;
Activation parse_activation(std::string_view name);

double sigmoid(double x) noexcept;

// y = act(x W + b), W is in_dim x out_dim.
struct DenseLayer {
    DenseMatrix weight;
    std::vector<double> bias;
    Activation activation = Activation::sigmoid;

    std::size_t in_dim() const noexcept { return weight.rows(); }
    std::size_t out_dim() const noexcept { return weight.cols(); }

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpParams {
    std::vector<DenseLayer> layers;

    std::size_t in_dim() const noexcept { return layers.empty() ? 0 : layers.front().in_dim(); }
    std::size_t out_dim() const noexcept { return layers.empty() ? 0 : layers.back().out_dim(); }
    std::size_t parameter_count() const noexcept;

    // Throws DimensionMismatch if widths do not chain or bias sizes disagree.
    void validate() const;

    friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

// widths = {in, h1, ..., out}; activations has widths.size() - 1 entries.
// Weights are Glorot-uniform, biases zero.
MlpParams make_mlp(std::span<const std::size_t> widths, std::span<const Activation> activations, Rng& rng);

// Same shapes, all entries zero.
MlpParams zeros_like(const MlpParams& params);

// activations[0] is the input, activations[l + 1] the post-activation output of layer l.
struct MlpTape {
    std::vector<DenseMatrix> activations;

    const DenseMatrix& output() const { return activations.back(); }
};

MlpTape mlp_forward(const MlpParams& params, const DenseMatrix& x);

struct MlpGradients {
    MlpParams params;       // congruent with the forward parameters
    DenseMatrix input_grad; // empty unless requested
};

// Backpropagates dL/d(output). The input gradient is skipped unless asked for.
MlpGradients mlp_backward(const MlpParams& params, const MlpTape& tape, const DenseMatrix& upstream,
                          bool want_input_grad = true);

// Flat views in a fixed order: layer by layer, weight then bias.
void append_views(MlpParams& params, std::vector<std::span<double>>& out);
void append_views(const MlpParams& params, std::vector<std::span<const double>>& out);

}  // namespace tabclust::numkit
