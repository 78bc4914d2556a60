#include "tabclust/evalkit/protocol.hpp"

#include <algorithm>
#include <exception>

#include "tabclust/cluster/gmm.hpp"
#include "tabclust/cluster/kmeans.hpp"
#include "tabclust/errors.hpp"
#include "tabclust/evalkit/accuracy.hpp"
#include "tabclust/evalkit/ranking.hpp"

namespace tabclust::eval {

using numkit::DenseMatrix;

std::string_view to_string(MethodId m) noexcept {
    switch (m) {
        case MethodId::gmm: return "gmm";
        case MethodId::kmeans: return "kmeans";
        case MethodId::dec: return "dec";
        case MethodId::idec: return "idec";
        case MethodId::dkm: return "dkm";
        case MethodId::depict1d: return "depict1d";
    }
    return "unknown";
}

std::optional<MethodId> parse_method(std::string_view name) noexcept {
    for (MethodId m : all_methods()) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

const std::vector<MethodId>& all_methods() {
    static const std::vector<MethodId> methods{MethodId::gmm, MethodId::kmeans, MethodId::dec,
                                               MethodId::idec, MethodId::dkm, MethodId::depict1d};
    return methods;
}

bool is_deep(MethodId m) noexcept { return m != MethodId::gmm && m != MethodId::kmeans; }

embed::DeepMethod deep_method(MethodId m) {
    switch (m) {
        case MethodId::dec: return embed::DeepMethod::dec;
        case MethodId::idec: return embed::DeepMethod::idec;
        case MethodId::dkm: return embed::DeepMethod::dkm;
        case MethodId::depict1d: return embed::DeepMethod::depict1d;
        default: break;
    }
    throw InvalidArgument("deep_method: '" + std::string(to_string(m)) + "' is not an embedding method");
}

bool uses_gamma(MethodId m) noexcept { return m == MethodId::idec || m == MethodId::dkm || m == MethodId::depict1d; }

std::uint64_t ProtocolPlan::fold_seed(std::size_t fold) const noexcept { return numkit::Rng::derive(base_seed, fold); }

ProtocolPlan plan_protocol(const data::Dataset& ds, numkit::Rng& rng, bool stratified) {
    ProtocolPlan plan;
    plan.folds = stratified ? make_stratified_folds(ds.y, rng) : make_folds(ds.n(), rng);
    plan.base_seed = rng.next_u64();
    return plan;
}

FoldData prepare_fold(const data::Dataset& ds, const FoldPlan& plan, std::size_t fold) {
    if (fold >= plan.folds.size()) throw InvalidArgument("prepare_fold: fold index out of range");
    const auto train_rows = plan.train_indices(fold);
    FoldData out{data::subset(ds, train_rows), data::subset(ds, plan.folds[fold]), {}};
    out.transform = data::Standardizer::fit(out.train.x);
    out.train.x = out.transform.apply(out.train.x);
    out.test.x = out.transform.apply(out.test.x);
    return out;
}

namespace {

constexpr std::size_t kKMeansIterations = 300;

CandidateOutcome evaluate_baseline(MethodId method, const FoldData& fold, const embed::MethodConfig& candidate,
                                   std::uint64_t seed) {
    numkit::Rng rng(seed);
    const std::size_t k = fold.train.k;
    CandidateOutcome out;
    if (method == MethodId::kmeans) {
        const auto model = cluster::kmeans_fit(fold.train.x, k, rng, kKMeansIterations, candidate.kmeans_restarts);
        out.train_accuracy = cluster_accuracy(fold.train.y, model.assignments, k);
        out.test_accuracy = cluster_accuracy(fold.test.y, cluster::kmeans_assign(model, fold.test.x), k);
    } else {
        cluster::GmmOptions opts;
        opts.n_restarts = candidate.kmeans_restarts;
        const auto model = cluster::gmm_fit(fold.train.x, k, rng, opts);
        out.train_accuracy = cluster_accuracy(fold.train.y, cluster::gmm_predict(model, fold.train.x), k);
        out.test_accuracy = cluster_accuracy(fold.test.y, cluster::gmm_predict(model, fold.test.x), k);
    }
    return out;
}

}  // namespace

CandidateOutcome evaluate_candidate(MethodId method, const FoldData& fold, const embed::MethodConfig& candidate,
                                    std::uint64_t seed, const ProtocolOptions& options) {
    if (!is_deep(method)) return evaluate_baseline(method, fold, candidate, seed);

    embed::MethodConfig config = candidate;
    config.method = deep_method(method);
    config.seed = seed;
    const std::size_t k = fold.train.k;

    DenseMatrix x_train = fold.train.x;
    DenseMatrix x_test = fold.test.x;
    CandidateOutcome out;
    autoenc::AutoencoderSpec spec;
    if (method == MethodId::depict1d) {
        if (options.depict_pad_to > x_train.cols()) {
            x_train = numkit::pad_columns(x_train, options.depict_pad_to);
            x_test = numkit::pad_columns(x_test, options.depict_pad_to);
        }
        spec = embed::default_spec(config.method, x_train.cols(), k);
        try {
            spec.validate();
        } catch (const DegenerateGeometry&) {
            spec = autoenc::AutoencoderSpec::depict_mlp(x_train.cols());
            out.depict_fallback = true;
        }
    } else {
        spec = embed::default_spec(config.method, x_train.cols(), k);
    }

    numkit::Rng rng(seed);
    const auto model = embed::train_method(spec, x_train, k, config, rng, options.cache);
    out.history = model.history;
    out.pretrain_history = model.pretrain_history;

    numkit::Rng eval_rng(numkit::Rng::derive(seed, 1));
    const DenseMatrix z_train = autoenc::encode(model.autoencoder, x_train);
    const DenseMatrix z_test = autoenc::encode(model.autoencoder, x_test);
    const auto km_train = cluster::kmeans_fit(z_train, k, eval_rng, kKMeansIterations, options.kmeans_restarts);
    out.train_accuracy = cluster_accuracy(fold.train.y, km_train.assignments, k);
    const auto km_test = cluster::kmeans_fit(z_test, k, eval_rng, kKMeansIterations, options.kmeans_restarts);
    out.test_accuracy = cluster_accuracy(fold.test.y, km_test.assignments, k);
    return out;
}

std::vector<embed::MethodConfig> effective_grid(MethodId method, const std::vector<embed::MethodConfig>& grid) {
    if (grid.empty()) throw InvalidArgument("run_protocol: empty hyperparameter grid");
    if (uses_gamma(method)) return grid;
    return {grid.front()};
}

std::optional<std::size_t> select_candidate(const std::vector<std::optional<double>>& train_scores) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < train_scores.size(); ++i) {
        if (!train_scores[i]) continue;
        if (!best || *train_scores[i] > *train_scores[*best]) best = i;
    }
    return best;
}

bool EvalResult::complete() const noexcept {
    return folds.size() == kFoldCount &&
           std::all_of(folds.begin(), folds.end(), [](const FoldRecord& f) { return f.ok; });
}

EvalResult summarize(MethodId method, std::string dataset, std::vector<FoldRecord> folds) {
    EvalResult r;
    r.method = method;
    r.dataset = std::move(dataset);
    r.folds = std::move(folds);
    for (const auto& f : r.folds) {
        if (f.ok) r.fold_accuracies.push_back(f.accuracy);
    }
    const AccuracyCell agg = mean_and_std(r.fold_accuracies);
    r.mean = agg.mean;
    r.std = agg.std;
    return r;
}

EvalResult run_protocol(MethodId method, const data::Dataset& ds, const std::vector<embed::MethodConfig>& grid,
                        numkit::Rng& rng, const ProtocolOptions& options) {
    ds.validate();
    const auto candidates = effective_grid(method, grid);
    const ProtocolPlan plan = plan_protocol(ds, rng, options.stratified_folds);
    std::vector<FoldRecord> records;
    for (std::size_t f = 0; f < kFoldCount; ++f) {
        FoldRecord rec;
        rec.fold = f;
        rec.seed = plan.fold_seed(f);
        const FoldData fold = prepare_fold(ds, plan.folds, f);
        std::vector<std::optional<double>> scores;
        std::vector<double> tests;
        std::string errors;
        for (const auto& c : candidates) {
            try {
                const auto o = evaluate_candidate(method, fold, c, rec.seed, options);
                scores.push_back(o.train_accuracy);
                tests.push_back(o.test_accuracy);
            } catch (const Error& e) {
                scores.push_back(std::nullopt);
                tests.push_back(0.0);
                errors += (errors.empty() ? "" : "; ") + std::string(e.what());
            }
        }
        if (const auto best = select_candidate(scores)) {
            rec.ok = true;
            rec.chosen_candidate = *best;
            rec.accuracy = tests[*best];
            if (uses_gamma(method)) rec.chosen_gamma = candidates[*best].gamma;
        } else {
            rec.error = errors;
        }
        records.push_back(std::move(rec));
    }
    return summarize(method, ds.name, std::move(records));
}

}  // namespace tabclust::eval
