#include "tabclust/numkit/mlp.hpp"

#include <cmath>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::numkit {

std::string_view to_string(Activation a) noexcept {
    return a == Activation::sigmoid ? "sigmoid" : "linear";
}

Activation parse_activation(std::string_view name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "linear") return Activation::linear;
    throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

std::size_t MlpParams::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weight.size() + l.bias.size();
    return n;
}

void MlpParams::validate() const {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].bias.size() != layers[l].out_dim()) {
            throw DimensionMismatch("mlp layer " + std::to_string(l) + ": bias length " +
                                    std::to_string(layers[l].bias.size()) + " != out_dim " +
                                    std::to_string(layers[l].out_dim()));
        }
        if (l + 1 < layers.size() && layers[l].out_dim() != layers[l + 1].in_dim()) {
            throw DimensionMismatch("mlp layer " + std::to_string(l) + " out_dim " +
                                    std::to_string(layers[l].out_dim()) + " != next in_dim " +
                                    std::to_string(layers[l + 1].in_dim()));
        }
    }
}

MlpParams make_mlp(std::span<const std::size_t> widths, std::span<const Activation> activations, Rng& rng) {
    if (widths.size() < 2 || activations.size() + 1 != widths.size()) {
        throw InvalidArgument("make_mlp: need widths.size() >= 2 and one activation per layer");
    }
    MlpParams p;
    p.layers.reserve(activations.size());
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const std::size_t fan_in = widths[l];
        const std::size_t fan_out = widths[l + 1];
        if (fan_in == 0 || fan_out == 0) throw InvalidArgument("make_mlp: zero width");
        DenseLayer layer;
        layer.weight = DenseMatrix(fan_in, fan_out);
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& w : layer.weight.values()) w = rng.uniform(-limit, limit);
        layer.bias.assign(fan_out, 0.0);
        layer.activation = activations[l];
        p.layers.push_back(std::move(layer));
    }
    return p;
}

MlpParams zeros_like(const MlpParams& params) {
    MlpParams z;
    z.layers.reserve(params.layers.size());
    for (const auto& l : params.layers) {
        z.layers.push_back({DenseMatrix(l.in_dim(), l.out_dim()), std::vector<double>(l.out_dim(), 0.0), l.activation});
    }
    return z;
}

MlpTape mlp_forward(const MlpParams& params, const DenseMatrix& x) {
    if (params.layers.empty()) throw InvalidArgument("mlp_forward: no layers");
    if (x.cols() != params.in_dim()) {
        throw DimensionMismatch("mlp_forward: input has " + std::to_string(x.cols()) + " columns, first layer expects " +
                                std::to_string(params.in_dim()));
    }
    MlpTape tape;
    tape.activations.reserve(params.layers.size() + 1);
    tape.activations.push_back(x);
    for (const auto& layer : params.layers) {
        DenseMatrix y = matmul(tape.activations.back(), layer.weight);
        add_row_vector(y, layer.bias);
        if (layer.activation == Activation::sigmoid) {
            for (double& v : y.values()) v = sigmoid(v);
        }
        tape.activations.push_back(std::move(y));
    }
    return tape;
}

MlpGradients mlp_backward(const MlpParams& params, const MlpTape& tape, const DenseMatrix& upstream,
                          bool want_input_grad) {
    if (tape.activations.size() != params.layers.size() + 1) {
        throw DimensionMismatch("mlp_backward: tape does not match parameters");
    }
    const DenseMatrix& out = tape.output();
    if (upstream.rows() != out.rows() || upstream.cols() != out.cols()) {
        throw DimensionMismatch("mlp_backward: upstream gradient is " + std::to_string(upstream.rows()) + "x" +
                                std::to_string(upstream.cols()) + ", output is " + std::to_string(out.rows()) + "x" +
                                std::to_string(out.cols()));
    }
    MlpGradients g;
    g.params.layers.resize(params.layers.size());
    DenseMatrix delta = upstream;
    for (std::size_t l = params.layers.size(); l-- > 0;) {
        const auto& layer = params.layers[l];
        if (layer.activation == Activation::sigmoid) {
            const auto y = tape.activations[l + 1].values();
            auto d = delta.values();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] *= y[i] * (1.0 - y[i]);
        }
        auto& gl = g.params.layers[l];
        gl.activation = layer.activation;
        gl.weight = matmul_at_b(tape.activations[l], delta);
        gl.bias = column_sums(delta);
        if (l > 0 || want_input_grad) delta = matmul_a_bt(delta, layer.weight);
    }
    if (want_input_grad) g.input_grad = std::move(delta);
    return g;
}

void append_views(MlpParams& params, std::vector<std::span<double>>& out) {
    for (auto& l : params.layers) {
        out.emplace_back(l.weight.values());
        out.emplace_back(l.bias);
    }
}

void append_views(const MlpParams& params, std::vector<std::span<const double>>& out) {
    for (const auto& l : params.layers) {
        out.emplace_back(l.weight.values());
        out.emplace_back(l.bias);
    }
}

}  // namespace tabclust::numkit
