#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tabclust/autoenc/autoencoder.hpp"
#include "tabclust/autoenc/pretrain.hpp"
#include "tabclust/autoenc/training.hpp"
#include "tabclust/numkit/rng.hpp"

namespace tabclust::embed {

using autoenc::Autoencoder;
using autoenc::AutoencoderSpec;
using autoenc::EpochLoss;
using numkit::DenseMatrix;

enum class DeepMethod { dec, idec, dkm, depict1d };

std::string_view to_string(DeepMethod m) noexcept;

struct MethodConfig {
    DeepMethod method = DeepMethod::idec;
    double gamma = 0.1;                 // clustering-term weight; DEC ignores it
    std::size_t epochs = 1000;          // clustering fine-tune epochs
    std::size_t pretrain_epochs = 200;  // reconstruction-only epochs before fine-tuning
    double lr = 1e-3;
    std::size_t batch_size = 256;
    std::size_t p_update_interval = 5;  // epochs between target refreshes
    double dkm_inv_temperature = 10.0;
    bool dkm_anneal = false;            // double the inverse temperature every 100 epochs
    std::size_t kmeans_restarts = 10;
    std::uint64_t seed = 0;             // recorded provenance; the trainers draw from the Rng they are given

    void validate() const;
};

struct TrainedEmbeddingModel {
    Autoencoder autoencoder;
    DenseMatrix centroids;  // K x m
    DeepMethod method = DeepMethod::idec;
    std::vector<EpochLoss> history;           // fine-tune epochs
    std::vector<EpochLoss> pretrain_history;  // reconstruction epochs
};

// Default architecture per method: DEC/IDEC d-500-500-2000-10, DKM with a
// K-dimensional embedding, DEPICT-1D with the default conv front.
AutoencoderSpec default_spec(DeepMethod method, std::size_t input_dim, std::size_t clusters);

/// Every trainer runs: reconstruction pretraining (drawing one seed from
/// `rng`, shared through `cache` when given), k-means on the pretrained
/// embedding to place the centroids, then the method's clustering fine-tune.
///
/// DEC: encoder and centroids minimise KL(P || Q); the decoder is unused.
/// IDEC: the whole autoencoder and centroids minimise recon + gamma * KL.
/// DKM: recon + gamma * softmin-weighted squared distance to the centroids.
/// DEPICT-1D: the IDEC objective on a conv1d-front autoencoder (an mlp spec
/// is accepted as the fallback variant).
///
/// Optimisation minimises the batch mean; history records sum-form losses.
TrainedEmbeddingModel train_dec(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache = nullptr);
TrainedEmbeddingModel train_idec(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                 const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache = nullptr);
TrainedEmbeddingModel train_dkm(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache = nullptr);
TrainedEmbeddingModel train_depict1d(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                     const MethodConfig& config, numkit::Rng& rng,
                                     autoenc::PretrainCache* cache = nullptr);

// Dispatches on config.method.
TrainedEmbeddingModel train_method(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                   const MethodConfig& config, numkit::Rng& rng,
                                   autoenc::PretrainCache* cache = nullptr);

}  // namespace tabclust::embed
