#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tabclust/numkit/matrix.hpp"
#include "tabclust/numkit/mlp.hpp"

namespace tabclust::numkit {

// Feature maps are stored as DenseMatrix rows of length channels * length,
// channel-major: element (c, t) of sample n lives at (n, c * length + t).
//
// A forward layer computes
//   out[o][t] = b[o] + sum_i sum_k w[o][i][k] * in[i][t * stride + k]
// and a transposed layer scatters the same taps back:
//   out[o][t * stride + k] += w[o][i][k] * in[i][t],  plus b[o] everywhere.
struct Conv1dLayer {
    std::size_t in_channels = 1;
    std::size_t out_channels = 1;
    std::size_t kernel_width = 1;
    std::size_t stride = 1;
    std::vector<double> kernel;  // out_channels x in_channels x kernel_width
    std::vector<double> bias;    // out_channels
    Activation activation = Activation::linear;
    bool transposed = false;
    std::size_t output_padding = 0;  // transposed only: trailing bias-only positions

    double& w(std::size_t o, std::size_t i, std::size_t k) noexcept {
        return kernel[(o * in_channels + i) * kernel_width + k];
    }
    double w(std::size_t o, std::size_t i, std::size_t k) const noexcept {
        return kernel[(o * in_channels + i) * kernel_width + k];
    }

    // Throws DegenerateGeometry when the output would be empty.
    std::size_t output_length(std::size_t in_len) const;

    friend bool operator==(const Conv1dLayer&, const Conv1dLayer&) = default;
};

struct Conv1dParams {
    std::vector<Conv1dLayer> layers;

    std::size_t in_channels() const noexcept { return layers.empty() ? 1 : layers.front().in_channels; }
    std::size_t out_channels() const noexcept { return layers.empty() ? 1 : layers.back().out_channels; }
    // Per-layer output lengths; throws DegenerateGeometry.
    std::vector<std::size_t> lengths(std::size_t in_len) const;
    void validate() const;

    friend bool operator==(const Conv1dParams&, const Conv1dParams&) = default;
};

Conv1dLayer make_conv_layer(std::size_t in_channels, std::size_t out_channels, std::size_t kernel_width,
                            std::size_t stride, Activation activation, Rng& rng);
Conv1dParams zeros_like(const Conv1dParams& params);

struct ConvTape {
    std::vector<DenseMatrix> activations;  // [0] is the input
    std::vector<std::size_t> lengths;      // sequence length of each activation

    const DenseMatrix& output() const { return activations.back(); }
};

// x has in_channels() * L columns.
ConvTape conv1d_forward(const Conv1dParams& params, const DenseMatrix& x);

struct ConvGradients {
    Conv1dParams params;
    DenseMatrix input_grad;
};

ConvGradients conv1d_backward(const Conv1dParams& params, const ConvTape& tape, const DenseMatrix& upstream,
                              bool want_input_grad = true);

void append_views(Conv1dParams& params, std::vector<std::span<double>>& out);
void append_views(const Conv1dParams& params, std::vector<std::span<const double>>& out);

}  // namespace tabclust::numkit
