#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "tabclust/autoenc/autoencoder.hpp"
#include "tabclust/autoenc/training.hpp"

namespace tabclust::autoenc {

struct PretrainOptions {
    std::size_t epochs = 200;
    std::size_t batch_size = 256;
    numkit::AdamConfig adam;
};

struct PretrainResult {
    Autoencoder autoencoder;
    std::vector<EpochLoss> history;  // recon == total, cluster == 0
};

// Reconstruction-only training; zero epochs returns the freshly initialised
// autoencoder. Throws InvalidArgument on non-finite input.
PretrainResult pretrain(const AutoencoderSpec& spec, const DenseMatrix& x, const PretrainOptions& options,
                        numkit::Rng& rng);

// Memoises pretraining keyed by (spec, data, options, seed). Safe to share
// between threads; concurrent requests for one key compute it once.
class PretrainCache {
public:
    std::shared_ptr<const PretrainResult> get_or_compute(const std::string& key,
                                                         const std::function<PretrainResult()>& compute);
    std::size_t size() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_future<std::shared_ptr<const PretrainResult>>> entries_;
};

std::string pretrain_key(const AutoencoderSpec& spec, const DenseMatrix& x, const PretrainOptions& options,
                         std::uint64_t seed);

// pretrain() driven by Rng(seed), going through `cache` when it is non-null.
std::shared_ptr<const PretrainResult> pretrain_seeded(PretrainCache* cache, const AutoencoderSpec& spec,
                                                      const DenseMatrix& x, const PretrainOptions& options,
                                                      std::uint64_t seed);

}  // namespace tabclust::autoenc
