#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tabclust/numkit/adam.hpp"
#include "tabclust/numkit/conv1d.hpp"
#include "tabclust/numkit/matrix.hpp"
#include "tabclust/numkit/mlp.hpp"
#include "tabclust/numkit/rng.hpp"

namespace tabclust::autoenc {

using numkit::Activation;
using numkit::DenseMatrix;

enum class AutoencoderKind { mlp, conv1d_front };

struct ConvLayerGeometry {
    std::size_t out_channels = 1;
    std::size_t kernel_width = 1;
    std::size_t stride = 1;
    Activation activation = Activation::sigmoid;

    friend bool operator==(const ConvLayerGeometry&, const ConvLayerGeometry&) = default;
};

enum class ConvInit { glorot, identity };

struct ConvPlan {
    std::vector<ConvLayerGeometry> layers;
    // identity: delta kernels (width 1, channel-preserving layers only), zero bias.
    ConvInit init = ConvInit::glorot;
    bool trainable = true;

    // Three layers, 16/32/64 channels, width 5, stride 2, linear.
    static ConvPlan depict_default();
    // One linear width-1 single-channel layer with a frozen delta kernel.
    static ConvPlan identity();

    friend bool operator==(const ConvPlan&, const ConvPlan&) = default;
};

/// Layer plan of a symmetric autoencoder.
///
/// For `mlp` the fully connected stack is input_dim -> encoder_widths ->
/// embedding_dim -> decoder_widths -> input_dim. For `conv1d_front` the input
/// first passes through the conv plan (one input channel); the fully connected
/// stack then runs on the flattened feature maps and the decoder ends with
/// transposed convolutions back to input_dim.
///
/// Hidden layers are sigmoid; the embedding and the reconstruction are linear.
struct AutoencoderSpec {
    std::size_t input_dim = 0;
    std::vector<std::size_t> encoder_widths;
    std::size_t embedding_dim = 0;
    std::vector<std::size_t> decoder_widths;
    AutoencoderKind kind = AutoencoderKind::mlp;
    std::optional<ConvPlan> conv_plan;

    // d-500-500-2000-10-2000-500-500-d
    static AutoencoderSpec dec(std::size_t input_dim);
    // d-500-500-2000-k-2000-500-500-d
    static AutoencoderSpec dkm(std::size_t input_dim, std::size_t clusters);
    // conv front + d'-50-50-10-50-50-d'
    static AutoencoderSpec depict(std::size_t input_dim, ConvPlan plan = ConvPlan::depict_default());
    // d-50-50-10-50-50-d, used when the conv plan does not fit the input
    static AutoencoderSpec depict_mlp(std::size_t input_dim);
    static AutoencoderSpec symmetric(std::size_t input_dim, std::vector<std::size_t> encoder_widths,
                                     std::size_t embedding_dim);

    // Throws InvalidArgument, or DegenerateGeometry when the conv plan does not fit.
    void validate() const;
    // Width entering the fully connected stack (input_dim for mlp).
    std::size_t flattened_dim() const;

    friend bool operator==(const AutoencoderSpec&, const AutoencoderSpec&) = default;
};

struct Autoencoder {
    AutoencoderSpec spec;
    std::optional<numkit::Conv1dParams> conv_encoder;
    numkit::MlpParams encoder;
    numkit::MlpParams decoder;
    std::optional<numkit::Conv1dParams> conv_decoder;

    std::size_t parameter_count() const noexcept;

    friend bool operator==(const Autoencoder&, const Autoencoder&) = default;
};

// Initialisation order: encoder MLP, decoder MLP, conv encoder, conv decoder.
Autoencoder build_autoencoder(const AutoencoderSpec& spec, numkit::Rng& rng);

DenseMatrix encode(const Autoencoder& ae, const DenseMatrix& x);
DenseMatrix reconstruct(const Autoencoder& ae, const DenseMatrix& x);

// sum_i ||x_i - xhat_i||^2
double recon_loss(const DenseMatrix& x, const DenseMatrix& xhat);
// recon_loss / rows
double recon_loss_mean(const DenseMatrix& x, const DenseMatrix& xhat);

struct AutoencoderPass {
    std::optional<numkit::ConvTape> conv_encoder;
    numkit::MlpTape encoder;
    std::optional<numkit::MlpTape> decoder;
    std::optional<numkit::ConvTape> conv_decoder;

    const DenseMatrix& embedding() const { return encoder.output(); }
    const DenseMatrix& reconstruction() const;
};

AutoencoderPass forward_pass(const Autoencoder& ae, const DenseMatrix& x, bool with_decoder = true);

struct AutoencoderGrads {
    std::optional<numkit::Conv1dParams> conv_encoder;
    numkit::MlpParams encoder;
    std::optional<numkit::MlpParams> decoder;
    std::optional<numkit::Conv1dParams> conv_decoder;
};

// Either gradient may be null. The reconstruction gradient requires a pass
// that ran the decoder.
AutoencoderGrads backward_pass(const Autoencoder& ae, const AutoencoderPass& pass, const DenseMatrix* recon_grad,
                               const DenseMatrix* embedding_grad);

enum class ParamScope { encoder, all };

// Trainable parameter groups in a fixed order; frozen conv layers are skipped.
void collect_params(Autoencoder& ae, ParamScope scope, numkit::ParamViews& out);
// Same order as collect_params. Missing gradient parts throw.
void collect_grads(const Autoencoder& ae, const AutoencoderGrads& grads, ParamScope scope, numkit::GradViews& out);

}  // namespace tabclust::autoenc
