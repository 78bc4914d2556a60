#include "tabclust/embedcluster/trainers.hpp"

#include <cmath>
#include <string>

#include "tabclust/cluster/kmeans.hpp"
#include "tabclust/embedcluster/distributions.hpp"
#include "tabclust/embedcluster/dkm_objective.hpp"
#include "tabclust/errors.hpp"

namespace tabclust::embed {

using autoenc::ParamScope;

std::string_view to_string(DeepMethod m) noexcept {
    switch (m) {
        case DeepMethod::dec: return "dec";
        case DeepMethod::idec: return "idec";
        case DeepMethod::dkm: return "dkm";
        case DeepMethod::depict1d: return "depict1d";
    }
    return "?";
}

void MethodConfig::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("method config: gamma must be >= 0");
    if (epochs < 1) throw InvalidArgument("method config: epochs must be >= 1");
    if (!(lr > 0.0)) throw InvalidArgument("method config: learning rate must be positive");
    if (batch_size < 1) throw InvalidArgument("method config: batch size must be positive");
    if (p_update_interval < 1) throw InvalidArgument("method config: p_update_interval must be positive");
    if (!(dkm_inv_temperature > 0.0)) throw InvalidArgument("method config: DKM inverse temperature must be positive");
    if (kmeans_restarts < 1) throw InvalidArgument("method config: kmeans_restarts must be positive");
}

AutoencoderSpec default_spec(DeepMethod method, std::size_t input_dim, std::size_t clusters) {
    switch (method) {
        case DeepMethod::dec:
        case DeepMethod::idec: return AutoencoderSpec::dec(input_dim);
        case DeepMethod::dkm: return AutoencoderSpec::dkm(input_dim, clusters);
        case DeepMethod::depict1d: return AutoencoderSpec::depict(input_dim);
    }
    throw InvalidArgument("default_spec: unknown method");
}

namespace {

enum class Objective { kl_only, recon_plus_kl, recon_plus_softmin };

autoenc::TrainLoopOptions loop_options(const MethodConfig& c) {
    autoenc::TrainLoopOptions o;
    o.epochs = c.epochs;
    o.batch_size = c.batch_size;
    o.adam.lr = c.lr;
    return o;
}

// Pretraining plus k-means initialisation shared by all trainers.
TrainedEmbeddingModel initialise(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                 const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache) {
    config.validate();
    spec.validate();
    if (k < 1 || k > x.rows()) throw InvalidArgument("trainer: K must lie in [1, N]");
    autoenc::PretrainOptions po;
    po.epochs = config.pretrain_epochs;
    po.batch_size = config.batch_size;
    po.adam.lr = config.lr;
    const std::uint64_t pretrain_seed = rng.next_u64();
    const auto pre = autoenc::pretrain_seeded(cache, spec, x, po, pretrain_seed);

    TrainedEmbeddingModel model;
    model.method = config.method;
    model.autoencoder = pre->autoencoder;
    model.pretrain_history = pre->history;
    numkit::Rng km_rng = rng.split();
    const DenseMatrix z = autoenc::encode(model.autoencoder, x);
    model.centroids = cluster::kmeans_fit(z, k, km_rng, 300, config.kmeans_restarts).centroids;
    return model;
}

void finetune(TrainedEmbeddingModel& model, const DenseMatrix& x, const MethodConfig& config, Objective objective,
              numkit::Rng& rng) {
    Autoencoder& ae = model.autoencoder;
    DenseMatrix& mu = model.centroids;
    const bool with_decoder = objective != Objective::kl_only;
    const ParamScope scope = with_decoder ? ParamScope::all : ParamScope::encoder;

    numkit::ParamViews params;
    autoenc::collect_params(ae, scope, params);
    params.emplace_back(mu.values());

    DenseMatrix target;
    double inv_temperature = config.dkm_inv_temperature;
    const auto before_epoch = [&](std::size_t epoch) {
        if (objective == Objective::recon_plus_softmin) {
            if (config.dkm_anneal) inv_temperature = config.dkm_inv_temperature * std::ldexp(1.0, static_cast<int>(epoch / 100));
            return;
        }
        if (epoch % config.p_update_interval == 0) {
            target = target_distribution(soft_assign(autoenc::encode(ae, x), mu)).p;
        }
    };

    autoenc::AutoencoderGrads grads;
    DenseMatrix dmu;
    const auto step = [&](std::span<const std::size_t> rows, numkit::GradViews& out) {
        const DenseMatrix xb = numkit::select_rows(x, rows);
        const auto pass = autoenc::forward_pass(ae, xb, with_decoder);
        const DenseMatrix& z = pass.embedding();
        const double inv_b = 1.0 / static_cast<double>(rows.size());

        EpochLoss loss;
        ClusterGrads cg;
        double weight = 1.0;
        if (objective == Objective::recon_plus_softmin) {
            loss.cluster = dkm_cluster_loss(z, mu, inv_temperature);
            cg = dkm_gradient(z, mu, inv_temperature);
            weight = config.gamma;
        } else {
            const TargetDist pb{numkit::select_rows(target, rows)};
            loss.cluster = kl_loss(pb, soft_assign(z, mu));
            cg = kl_gradient(z, mu, pb);
            if (objective == Objective::recon_plus_kl) weight = config.gamma;
        }
        for (double& v : cg.embedding.values()) v *= weight * inv_b;
        for (double& v : cg.centroids.values()) v *= weight * inv_b;

        DenseMatrix dxhat;
        if (with_decoder) {
            const DenseMatrix& xhat = pass.reconstruction();
            loss.recon = autoenc::recon_loss(xb, xhat);
            dxhat = DenseMatrix(xb.rows(), xb.cols());
            for (std::size_t i = 0; i < dxhat.size(); ++i) {
                dxhat.values()[i] = 2.0 * inv_b * (xhat.values()[i] - xb.values()[i]);
            }
            loss.total = loss.recon + config.gamma * loss.cluster;
        } else {
            loss.total = loss.cluster;
        }
        grads = autoenc::backward_pass(ae, pass, with_decoder ? &dxhat : nullptr, &cg.embedding);
        dmu = std::move(cg.centroids);
        autoenc::collect_grads(ae, grads, scope, out);
        out.emplace_back(dmu.values());
        return loss;
    };

    model.history = autoenc::run_minibatch_training(params, x.rows(), loop_options(config), rng, before_epoch, step);
}

TrainedEmbeddingModel train_with(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                 const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache,
                                 Objective objective) {
    TrainedEmbeddingModel model = initialise(spec, x, k, config, rng, cache);
    numkit::Rng loop_rng = rng.split();
    finetune(model, x, config, objective, loop_rng);
    return model;
}

}  // namespace

TrainedEmbeddingModel train_dec(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache) {
    return train_with(spec, x, k, config, rng, cache, Objective::kl_only);
}

TrainedEmbeddingModel train_idec(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                 const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache) {
    return train_with(spec, x, k, config, rng, cache, Objective::recon_plus_kl);
}

TrainedEmbeddingModel train_dkm(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache) {
    if (spec.embedding_dim != k) {
        throw InvalidArgument("train_dkm: embedding dimension " + std::to_string(spec.embedding_dim) +
                              " must equal K=" + std::to_string(k));
    }
    return train_with(spec, x, k, config, rng, cache, Objective::recon_plus_softmin);
}

TrainedEmbeddingModel train_depict1d(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                     const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache) {
    return train_with(spec, x, k, config, rng, cache, Objective::recon_plus_kl);
}

TrainedEmbeddingModel train_method(const AutoencoderSpec& spec, const DenseMatrix& x, std::size_t k,
                                   const MethodConfig& config, numkit::Rng& rng, autoenc::PretrainCache* cache) {
    switch (config.method) {
        case DeepMethod::dec: return train_dec(spec, x, k, config, rng, cache);
        case DeepMethod::idec: return train_idec(spec, x, k, config, rng, cache);
        case DeepMethod::dkm: return train_dkm(spec, x, k, config, rng, cache);
        case DeepMethod::depict1d: return train_depict1d(spec, x, k, config, rng, cache);
    }
    throw InvalidArgument("train_method: unknown method");
}

}  // namespace tabclust::embed
