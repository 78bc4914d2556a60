#include "tabclust/autoenc/pretrain.hpp"

#include <cstring>
#include <sstream>

#include "tabclust/autoenc/checkpoint.hpp"
#include "tabclust/errors.hpp"

namespace tabclust::autoenc {

PretrainResult pretrain(const AutoencoderSpec& spec, const DenseMatrix& x, const PretrainOptions& options,
                        numkit::Rng& rng) {
    if (!x.all_finite()) throw InvalidArgument("pretrain: input contains non-finite values");
    if (x.rows() == 0) throw InvalidArgument("pretrain: no rows");

    numkit::Rng init_rng = rng.split();
    numkit::Rng order_rng = rng.split();
    PretrainResult result;
    Autoencoder& ae = result.autoencoder;
    ae = build_autoencoder(spec, init_rng);

    if (options.epochs == 0) return result;

    numkit::ParamViews params;
    collect_params(ae, ParamScope::all, params);

    AutoencoderGrads grads;
    DenseMatrix xb;
    const auto step = [&](std::span<const std::size_t> rows, numkit::GradViews& out) {
        xb = numkit::select_rows(x, rows);
        const auto pass = forward_pass(ae, xb, true);
        const DenseMatrix& xhat = pass.reconstruction();
        const double loss = recon_loss(xb, xhat);
        DenseMatrix dxhat(xb.rows(), xb.cols());
        const double scale = 2.0 / static_cast<double>(rows.size());
        for (std::size_t i = 0; i < dxhat.size(); ++i) dxhat.values()[i] = scale * (xhat.values()[i] - xb.values()[i]);
        grads = backward_pass(ae, pass, &dxhat, nullptr);
        collect_grads(ae, grads, ParamScope::all, out);
        return EpochLoss{loss, 0.0, loss};
    };

    TrainLoopOptions loop;
    loop.epochs = options.epochs;
    loop.batch_size = options.batch_size;
    loop.adam = options.adam;
    result.history = run_minibatch_training(params, x.rows(), loop, order_rng, nullptr, step);
    return result;
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::string pretrain_key(const AutoencoderSpec& spec, const DenseMatrix& x, const PretrainOptions& options,
                         std::uint64_t seed) {
    std::ostringstream os;
    os << spec_to_json(spec).dump() << '|' << x.rows() << 'x' << x.cols() << ':' << std::hex
       << fnv1a(x.data(), x.size() * sizeof(double)) << std::dec << '|' << options.epochs << '|' << options.batch_size
       << '|';
    const numkit::AdamConfig& a = options.adam;
    for (double v : {a.lr, a.beta1, a.beta2, a.eps}) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        os << std::hex << bits << std::dec << ',';
    }
    os << '|' << seed;
    return os.str();
}

std::shared_ptr<const PretrainResult> PretrainCache::get_or_compute(const std::string& key,
                                                                    const std::function<PretrainResult()>& compute) {
    std::promise<std::shared_ptr<const PretrainResult>> promise;
    std::shared_future<std::shared_ptr<const PretrainResult>> pending;
    {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            pending = it->second;
        } else {
            entries_.emplace(key, promise.get_future().share());
        }
    }
    if (pending.valid()) return pending.get();
    try {
        auto value = std::make_shared<const PretrainResult>(compute());
        promise.set_value(value);
        return value;
    } catch (...) {
        promise.set_exception(std::current_exception());
        throw;
    }
}

std::size_t PretrainCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void PretrainCache::clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
}

std::shared_ptr<const PretrainResult> pretrain_seeded(PretrainCache* cache, const AutoencoderSpec& spec,
                                                      const DenseMatrix& x, const PretrainOptions& options,
                                                      std::uint64_t seed) {
    const auto compute = [&] {
        numkit::Rng rng(seed);
        return pretrain(spec, x, options, rng);
    };
    if (!cache) return std::make_shared<const PretrainResult>(compute());
    return cache->get_or_compute(pretrain_key(spec, x, options, seed), compute);
}

}  // namespace tabclust::autoenc
