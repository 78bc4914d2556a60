#include "tabclust/autoenc/autoencoder.hpp"

#include <algorithm>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::autoenc {

using numkit::Conv1dLayer;
using numkit::Conv1dParams;
using numkit::MlpParams;

ConvPlan ConvPlan::depict_default() {
    ConvPlan p;
    // Linear filters: with sigmoid here as well the stack stalls far from a
    // usable reconstruction. The dense layers after it stay sigmoid.
    p.layers = {{16, 5, 2, Activation::linear}, {32, 5, 2, Activation::linear}, {64, 5, 2, Activation::linear}};
    return p;
}

ConvPlan ConvPlan::identity() {
    ConvPlan p;
    p.layers = {{1, 1, 1, Activation::linear}};
    p.init = ConvInit::identity;
    p.trainable = false;
    return p;
}

AutoencoderSpec AutoencoderSpec::symmetric(std::size_t input_dim, std::vector<std::size_t> encoder_widths,
                                           std::size_t embedding_dim) {
    AutoencoderSpec s;
    s.input_dim = input_dim;
    s.decoder_widths.assign(encoder_widths.rbegin(), encoder_widths.rend());
    s.encoder_widths = std::move(encoder_widths);
    s.embedding_dim = embedding_dim;
    return s;
}

AutoencoderSpec AutoencoderSpec::dec(std::size_t input_dim) { return symmetric(input_dim, {500, 500, 2000}, 10); }

AutoencoderSpec AutoencoderSpec::dkm(std::size_t input_dim, std::size_t clusters) {
    return symmetric(input_dim, {500, 500, 2000}, clusters);
}

AutoencoderSpec AutoencoderSpec::depict(std::size_t input_dim, ConvPlan plan) {
    AutoencoderSpec s = symmetric(input_dim, {50, 50}, 10);
    s.kind = AutoencoderKind::conv1d_front;
    s.conv_plan = std::move(plan);
    return s;
}

AutoencoderSpec AutoencoderSpec::depict_mlp(std::size_t input_dim) { return symmetric(input_dim, {50, 50}, 10); }

namespace {

// Output lengths of the encoder conv plan for an input of length d.
std::vector<std::size_t> plan_lengths(const ConvPlan& plan, std::size_t d) {
    std::vector<std::size_t> lens{d};
    for (std::size_t l = 0; l < plan.layers.size(); ++l) {
        const auto& g = plan.layers[l];
        if (lens.back() < g.kernel_width) {
            throw DegenerateGeometry("conv layer " + std::to_string(l) + ": input length " +
                                     std::to_string(lens.back()) + " shorter than kernel width " +
                                     std::to_string(g.kernel_width) + " (input_dim " + std::to_string(d) + ")");
        }
        lens.push_back((lens.back() - g.kernel_width) / g.stride + 1);
    }
    return lens;
}

}  // namespace

void AutoencoderSpec::validate() const {
    if (input_dim == 0) throw InvalidArgument("autoencoder: input_dim must be positive");
    if (embedding_dim == 0) throw InvalidArgument("autoencoder: embedding_dim must be positive");
    if (std::any_of(encoder_widths.begin(), encoder_widths.end(), [](std::size_t w) { return w == 0; })) {
        throw InvalidArgument("autoencoder: zero hidden width");
    }
    if (!std::equal(encoder_widths.begin(), encoder_widths.end(), decoder_widths.rbegin(), decoder_widths.rend())) {
        throw InvalidArgument("autoencoder: decoder widths must mirror encoder widths");
    }
    if (kind == AutoencoderKind::conv1d_front) {
        if (!conv_plan || conv_plan->layers.empty()) throw InvalidArgument("autoencoder: conv1d_front needs a conv plan");
        for (const auto& g : conv_plan->layers) {
            if (g.out_channels == 0 || g.kernel_width == 0 || g.stride == 0) {
                throw InvalidArgument("autoencoder: conv layer with zero channels, width or stride");
            }
        }
        if (conv_plan->init == ConvInit::identity) {
            std::size_t channels = 1;
            for (const auto& g : conv_plan->layers) {
                if (g.kernel_width != 1 || g.out_channels != channels) {
                    throw InvalidArgument("autoencoder: identity conv init needs width-1 channel-preserving layers");
                }
            }
        }
        plan_lengths(*conv_plan, input_dim);
    } else if (conv_plan) {
        throw InvalidArgument("autoencoder: conv plan given for an mlp autoencoder");
    }
}

std::size_t AutoencoderSpec::flattened_dim() const {
    if (kind != AutoencoderKind::conv1d_front) return input_dim;
    const auto lens = plan_lengths(*conv_plan, input_dim);
    return lens.back() * conv_plan->layers.back().out_channels;
}

std::size_t Autoencoder::parameter_count() const noexcept {
    std::size_t n = encoder.parameter_count() + decoder.parameter_count();
    for (const auto* c : {conv_encoder ? &*conv_encoder : nullptr, conv_decoder ? &*conv_decoder : nullptr}) {
        if (!c) continue;
        for (const auto& l : c->layers) n += l.kernel.size() + l.bias.size();
    }
    return n;
}

namespace {

void set_identity(Conv1dLayer& c) {
    std::fill(c.kernel.begin(), c.kernel.end(), 0.0);
    for (std::size_t o = 0; o < c.out_channels; ++o) c.w(o, o, 0) = 1.0;
    std::fill(c.bias.begin(), c.bias.end(), 0.0);
}

}  // namespace

Autoencoder build_autoencoder(const AutoencoderSpec& spec, numkit::Rng& rng) {
    spec.validate();
    Autoencoder ae;
    ae.spec = spec;
    const bool conv = spec.kind == AutoencoderKind::conv1d_front;
    const std::size_t flat = spec.flattened_dim();

    std::vector<std::size_t> enc{flat};
    enc.insert(enc.end(), spec.encoder_widths.begin(), spec.encoder_widths.end());
    enc.push_back(spec.embedding_dim);
    std::vector<Activation> enc_act(enc.size() - 1, Activation::sigmoid);
    enc_act.back() = Activation::linear;

    std::vector<std::size_t> dec{spec.embedding_dim};
    dec.insert(dec.end(), spec.decoder_widths.begin(), spec.decoder_widths.end());
    dec.push_back(flat);
    std::vector<Activation> dec_act(dec.size() - 1, Activation::sigmoid);
    // The decoder's last dense layer reproduces whatever fed the encoder's first one.
    dec_act.back() = conv ? spec.conv_plan->layers.back().activation : Activation::linear;

    ae.encoder = numkit::make_mlp(enc, enc_act, rng);
    ae.decoder = numkit::make_mlp(dec, dec_act, rng);

    if (conv) {
        const ConvPlan& plan = *spec.conv_plan;
        const auto lens = plan_lengths(plan, spec.input_dim);
        Conv1dParams ce;
        std::size_t in_ch = 1;
        for (const auto& g : plan.layers) {
            Conv1dLayer c;
            if (plan.init == ConvInit::identity) {
                c.in_channels = in_ch;
                c.out_channels = g.out_channels;
                c.kernel_width = g.kernel_width;
                c.stride = g.stride;
                c.activation = g.activation;
                c.kernel.resize(c.out_channels * c.in_channels * c.kernel_width);
                c.bias.resize(c.out_channels);
                set_identity(c);
            } else {
                c = numkit::make_conv_layer(in_ch, g.out_channels, g.kernel_width, g.stride, g.activation, rng);
            }
            ce.layers.push_back(std::move(c));
            in_ch = g.out_channels;
        }
        Conv1dParams cd;
        for (std::size_t l = plan.layers.size(); l-- > 0;) {
            const auto& enc_layer = ce.layers[l];
            const Activation act = l == 0 ? Activation::linear : plan.layers[l - 1].activation;
            Conv1dLayer c;
            if (plan.init == ConvInit::identity) {
                c = enc_layer;
                c.in_channels = enc_layer.out_channels;
                c.out_channels = enc_layer.in_channels;
                c.kernel.assign(c.out_channels * c.in_channels * c.kernel_width, 0.0);
                c.bias.assign(c.out_channels, 0.0);
                set_identity(c);
            } else {
                c = numkit::make_conv_layer(enc_layer.out_channels, enc_layer.in_channels, enc_layer.kernel_width,
                                            enc_layer.stride, act, rng);
            }
            c.activation = act;
            c.transposed = true;
            c.output_padding = lens[l] - ((lens[l + 1] - 1) * c.stride + c.kernel_width);
            cd.layers.push_back(std::move(c));
        }
        ae.conv_encoder = std::move(ce);
        ae.conv_decoder = std::move(cd);
    }
    return ae;
}

DenseMatrix encode(const Autoencoder& ae, const DenseMatrix& x) {
    return forward_pass(ae, x, false).embedding();
}

DenseMatrix reconstruct(const Autoencoder& ae, const DenseMatrix& x) {
    auto pass = forward_pass(ae, x, true);
    return pass.reconstruction();
}

double recon_loss(const DenseMatrix& x, const DenseMatrix& xhat) {
    if (x.rows() != xhat.rows() || x.cols() != xhat.cols()) {
        throw DimensionMismatch("recon_loss: shapes differ");
    }
    double s = 0.0;
    const auto a = x.values();
    const auto b = xhat.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double recon_loss_mean(const DenseMatrix& x, const DenseMatrix& xhat) {
    return x.rows() == 0 ? 0.0 : recon_loss(x, xhat) / static_cast<double>(x.rows());
}

const DenseMatrix& AutoencoderPass::reconstruction() const {
    if (conv_decoder) return conv_decoder->output();
    if (!decoder) throw InvalidArgument("AutoencoderPass: decoder was not run");
    return decoder->output();
}

AutoencoderPass forward_pass(const Autoencoder& ae, const DenseMatrix& x, bool with_decoder) {
    if (x.cols() != ae.spec.input_dim) {
        throw DimensionMismatch("autoencoder: input has " + std::to_string(x.cols()) + " columns, expected " +
                                std::to_string(ae.spec.input_dim));
    }
    AutoencoderPass pass;
    if (ae.conv_encoder) {
        pass.conv_encoder = numkit::conv1d_forward(*ae.conv_encoder, x);
        pass.encoder = numkit::mlp_forward(ae.encoder, pass.conv_encoder->output());
    } else {
        pass.encoder = numkit::mlp_forward(ae.encoder, x);
    }
    if (with_decoder) {
        pass.decoder = numkit::mlp_forward(ae.decoder, pass.encoder.output());
        if (ae.conv_decoder) pass.conv_decoder = numkit::conv1d_forward(*ae.conv_decoder, pass.decoder->output());
    }
    return pass;
}

AutoencoderGrads backward_pass(const Autoencoder& ae, const AutoencoderPass& pass, const DenseMatrix* recon_grad,
                               const DenseMatrix* embedding_grad) {
    AutoencoderGrads g;
    DenseMatrix dz;
    if (recon_grad) {
        if (!pass.decoder) throw InvalidArgument("backward_pass: reconstruction gradient without a decoder pass");
        DenseMatrix dflat;
        if (ae.conv_decoder) {
            auto cg = numkit::conv1d_backward(*ae.conv_decoder, *pass.conv_decoder, *recon_grad, true);
            g.conv_decoder = std::move(cg.params);
            dflat = std::move(cg.input_grad);
        }
        auto dg = numkit::mlp_backward(ae.decoder, *pass.decoder, ae.conv_decoder ? dflat : *recon_grad, true);
        g.decoder = std::move(dg.params);
        dz = std::move(dg.input_grad);
    }
    if (embedding_grad) {
        if (dz.empty()) {
            dz = *embedding_grad;
        } else {
            if (embedding_grad->rows() != dz.rows() || embedding_grad->cols() != dz.cols()) {
                throw DimensionMismatch("backward_pass: embedding gradient shape differs from embedding");
            }
            auto d = dz.values();
            auto e = embedding_grad->values();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] += e[i];
        }
    }
    if (dz.empty()) dz = DenseMatrix(pass.embedding().rows(), pass.embedding().cols(), 0.0);
    const bool need_conv = ae.conv_encoder && ae.spec.conv_plan && ae.spec.conv_plan->trainable;
    auto eg = numkit::mlp_backward(ae.encoder, pass.encoder, dz, need_conv);
    g.encoder = std::move(eg.params);
    if (need_conv) {
        auto cg = numkit::conv1d_backward(*ae.conv_encoder, *pass.conv_encoder, eg.input_grad, false);
        g.conv_encoder = std::move(cg.params);
    }
    return g;
}

namespace {

bool conv_trainable(const Autoencoder& ae) { return ae.spec.conv_plan && ae.spec.conv_plan->trainable; }

}  // namespace

void collect_params(Autoencoder& ae, ParamScope scope, numkit::ParamViews& out) {
    if (ae.conv_encoder && conv_trainable(ae)) numkit::append_views(*ae.conv_encoder, out);
    numkit::append_views(ae.encoder, out);
    if (scope == ParamScope::all) {
        numkit::append_views(ae.decoder, out);
        if (ae.conv_decoder && conv_trainable(ae)) numkit::append_views(*ae.conv_decoder, out);
    }
}

void collect_grads(const Autoencoder& ae, const AutoencoderGrads& grads, ParamScope scope, numkit::GradViews& out) {
    if (ae.conv_encoder && conv_trainable(ae)) {
        if (!grads.conv_encoder) throw InvalidArgument("collect_grads: missing conv encoder gradient");
        numkit::append_views(*grads.conv_encoder, out);
    }
    numkit::append_views(grads.encoder, out);
    if (scope == ParamScope::all) {
        if (!grads.decoder) throw InvalidArgument("collect_grads: missing decoder gradient");
        numkit::append_views(*grads.decoder, out);
        if (ae.conv_decoder && conv_trainable(ae)) {
            if (!grads.conv_decoder) throw InvalidArgument("collect_grads: missing conv decoder gradient");
            numkit::append_views(*grads.conv_decoder, out);
        }
    }
}

}  // namespace tabclust::autoenc
