#include "tabclust/numkit/conv1d.hpp"

#include <cmath>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::numkit {

std::size_t Conv1dLayer::output_length(std::size_t in_len) const {
    if (transposed) {
        if (in_len == 0) throw DegenerateGeometry("transposed conv1d: empty input");
        return (in_len - 1) * stride + kernel_width + output_padding;
    }
    if (in_len < kernel_width) {
        throw DegenerateGeometry("conv1d: input length " + std::to_string(in_len) + " shorter than kernel width " +
                                 std::to_string(kernel_width));
    }
    return (in_len - kernel_width) / stride + 1;
}

std::vector<std::size_t> Conv1dParams::lengths(std::size_t in_len) const {
    std::vector<std::size_t> out;
    out.reserve(layers.size() + 1);
    out.push_back(in_len);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        try {
            out.push_back(layers[l].output_length(out.back()));
        } catch (const DegenerateGeometry& e) {
            throw DegenerateGeometry("layer " + std::to_string(l) + ": " + e.what());
        }
    }
    return out;
}

void Conv1dParams::validate() const {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& c = layers[l];
        if (c.stride == 0 || c.kernel_width == 0 || c.in_channels == 0 || c.out_channels == 0) {
            throw InvalidArgument("conv1d layer " + std::to_string(l) + ": zero stride, width or channel count");
        }
        if (c.kernel.size() != c.out_channels * c.in_channels * c.kernel_width || c.bias.size() != c.out_channels) {
            throw DimensionMismatch("conv1d layer " + std::to_string(l) + ": kernel/bias size mismatch");
        }
        if (l + 1 < layers.size() && c.out_channels != layers[l + 1].in_channels) {
            throw DimensionMismatch("conv1d layer " + std::to_string(l) + ": channel counts do not chain");
        }
    }
}

Conv1dLayer make_conv_layer(std::size_t in_channels, std::size_t out_channels, std::size_t kernel_width,
                            std::size_t stride, Activation activation, Rng& rng) {
    Conv1dLayer c;
    c.in_channels = in_channels;
    c.out_channels = out_channels;
    c.kernel_width = kernel_width;
    c.stride = stride;
    c.activation = activation;
    c.kernel.resize(out_channels * in_channels * kernel_width);
    c.bias.assign(out_channels, 0.0);
    const double limit = std::sqrt(6.0 / static_cast<double>((in_channels + out_channels) * kernel_width));
    for (double& w : c.kernel) w = rng.uniform(-limit, limit);
    return c;
}

Conv1dParams zeros_like(const Conv1dParams& params) {
    Conv1dParams z = params;
    for (auto& l : z.layers) {
        std::fill(l.kernel.begin(), l.kernel.end(), 0.0);
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
    return z;
}

namespace {

void forward_layer(const Conv1dLayer& c, std::span<const double> in, std::size_t lin, std::span<double> out,
                   std::size_t lout) {
    const std::size_t w = c.kernel_width;
    if (!c.transposed) {
        for (std::size_t o = 0; o < c.out_channels; ++o) {
            for (std::size_t t = 0; t < lout; ++t) {
                double acc = c.bias[o];
                for (std::size_t i = 0; i < c.in_channels; ++i) {
                    const double* src = in.data() + i * lin + t * c.stride;
                    const double* ker = c.kernel.data() + (o * c.in_channels + i) * w;
                    for (std::size_t k = 0; k < w; ++k) acc += ker[k] * src[k];
                }
                out[o * lout + t] = acc;
            }
        }
    } else {
        for (std::size_t o = 0; o < c.out_channels; ++o) {
            for (std::size_t t = 0; t < lout; ++t) out[o * lout + t] = c.bias[o];
        }
        for (std::size_t i = 0; i < c.in_channels; ++i) {
            for (std::size_t t = 0; t < lin; ++t) {
                const double v = in[i * lin + t];
                for (std::size_t o = 0; o < c.out_channels; ++o) {
                    double* dst = out.data() + o * lout + t * c.stride;
                    const double* ker = c.kernel.data() + (o * c.in_channels + i) * w;
                    for (std::size_t k = 0; k < w; ++k) dst[k] += ker[k] * v;
                }
            }
        }
    }
    if (c.activation == Activation::sigmoid) {
        for (double& v : out) v = sigmoid(v);
    }
}

// delta is dL/d(pre-activation) of this layer's output.
void backward_layer(const Conv1dLayer& c, std::span<const double> in, std::size_t lin, std::span<const double> delta,
                    std::size_t lout, Conv1dLayer& grad, std::span<double> din) {
    const std::size_t w = c.kernel_width;
    for (std::size_t o = 0; o < c.out_channels; ++o) {
        double s = 0.0;
        for (std::size_t t = 0; t < lout; ++t) s += delta[o * lout + t];
        grad.bias[o] += s;
    }
    if (!c.transposed) {
        for (std::size_t o = 0; o < c.out_channels; ++o) {
            for (std::size_t i = 0; i < c.in_channels; ++i) {
                double* gk = grad.kernel.data() + (o * c.in_channels + i) * w;
                const double* ker = c.kernel.data() + (o * c.in_channels + i) * w;
                for (std::size_t t = 0; t < lout; ++t) {
                    const double d = delta[o * lout + t];
                    const double* src = in.data() + i * lin + t * c.stride;
                    for (std::size_t k = 0; k < w; ++k) gk[k] += d * src[k];
                    if (!din.empty()) {
                        double* dst = din.data() + i * lin + t * c.stride;
                        for (std::size_t k = 0; k < w; ++k) dst[k] += d * ker[k];
                    }
                }
            }
        }
    } else {
        for (std::size_t i = 0; i < c.in_channels; ++i) {
            for (std::size_t t = 0; t < lin; ++t) {
                const double v = in[i * lin + t];
                double acc = 0.0;
                for (std::size_t o = 0; o < c.out_channels; ++o) {
                    const double* d = delta.data() + o * lout + t * c.stride;
                    double* gk = grad.kernel.data() + (o * c.in_channels + i) * w;
                    const double* ker = c.kernel.data() + (o * c.in_channels + i) * w;
                    for (std::size_t k = 0; k < w; ++k) {
                        gk[k] += d[k] * v;
                        acc += d[k] * ker[k];
                    }
                }
                if (!din.empty()) din[i * lin + t] += acc;
            }
        }
    }
}

}  // namespace

ConvTape conv1d_forward(const Conv1dParams& params, const DenseMatrix& x) {
    if (params.layers.empty()) throw InvalidArgument("conv1d_forward: no layers");
    const std::size_t cin = params.in_channels();
    if (x.cols() == 0 || x.cols() % cin != 0) {
        throw DimensionMismatch("conv1d_forward: " + std::to_string(x.cols()) + " columns not divisible into " +
                                std::to_string(cin) + " channels");
    }
    ConvTape tape;
    tape.lengths = params.lengths(x.cols() / cin);
    tape.activations.reserve(params.layers.size() + 1);
    tape.activations.push_back(x);
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& c = params.layers[l];
        const std::size_t lin = tape.lengths[l];
        const std::size_t lout = tape.lengths[l + 1];
        const DenseMatrix& in = tape.activations.back();
        DenseMatrix out(x.rows(), c.out_channels * lout);
        for (std::size_t n = 0; n < x.rows(); ++n) forward_layer(c, in.row(n), lin, out.row(n), lout);
        tape.activations.push_back(std::move(out));
    }
    return tape;
}

ConvGradients conv1d_backward(const Conv1dParams& params, const ConvTape& tape, const DenseMatrix& upstream,
                              bool want_input_grad) {
    if (tape.activations.size() != params.layers.size() + 1) {
        throw DimensionMismatch("conv1d_backward: tape does not match parameters");
    }
    const DenseMatrix& out = tape.output();
    if (upstream.rows() != out.rows() || upstream.cols() != out.cols()) {
        throw DimensionMismatch("conv1d_backward: upstream gradient shape differs from output");
    }
    ConvGradients g;
    g.params = zeros_like(params);
    DenseMatrix delta = upstream;
    for (std::size_t l = params.layers.size(); l-- > 0;) {
        const auto& c = params.layers[l];
        if (c.activation == Activation::sigmoid) {
            const auto y = tape.activations[l + 1].values();
            auto d = delta.values();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] *= y[i] * (1.0 - y[i]);
        }
        const DenseMatrix& in = tape.activations[l];
        const bool need_din = l > 0 || want_input_grad;
        DenseMatrix din = need_din ? DenseMatrix(in.rows(), in.cols()) : DenseMatrix();
        for (std::size_t n = 0; n < in.rows(); ++n) {
            backward_layer(c, in.row(n), tape.lengths[l], delta.row(n), tape.lengths[l + 1], g.params.layers[l],
                           need_din ? din.row(n) : std::span<double>());
        }
        delta = std::move(din);
    }
    if (want_input_grad) g.input_grad = std::move(delta);
    return g;
}

void append_views(Conv1dParams& params, std::vector<std::span<double>>& out) {
    for (auto& l : params.layers) {
        out.emplace_back(l.kernel);
        out.emplace_back(l.bias);
    }
}

void append_views(const Conv1dParams& params, std::vector<std::span<const double>>& out) {
    for (const auto& l : params.layers) {
        out.emplace_back(l.kernel);
        out.emplace_back(l.bias);
    }
}

}  // namespace tabclust::numkit
