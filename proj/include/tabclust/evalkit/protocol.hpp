#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabclust/autoenc/pretrain.hpp"
#include "tabclust/dataio/dataset.hpp"
#include "tabclust/dataio/standardize.hpp"
#include "tabclust/embedcluster/trainers.hpp"
#include "tabclust/evalkit/folds.hpp"

namespace tabclust::eval {

// Registration order; tables list methods in this order.
enum class MethodId { gmm, kmeans, dec, idec, dkm, depict1d };

std::string_view to_string(MethodId m) noexcept;
std::optional<MethodId> parse_method(std::string_view name) noexcept;
const std::vector<MethodId>& all_methods();
bool is_deep(MethodId m) noexcept;
// Throws InvalidArgument for the baselines.
embed::DeepMethod deep_method(MethodId m);
// Whether the candidate's gamma affects the result (IDEC, DKM, DEPICT-1D).
bool uses_gamma(MethodId m) noexcept;

struct ProtocolOptions {
    bool stratified_folds = false;
    std::size_t depict_pad_to = 0;       // zero-pad the features to this width for DEPICT-1D
    std::size_t kmeans_restarts = 10;    // baselines and embedding clustering
    autoenc::PretrainCache* cache = nullptr;
};

// Fold assignment plus one seed per test fold. All candidates of a fold
// share its seed.
struct ProtocolPlan {
    FoldPlan folds;
    std::uint64_t base_seed = 0;

    std::uint64_t fold_seed(std::size_t fold) const noexcept;
};

// Draws the folds from `rng`, then the base seed.
ProtocolPlan plan_protocol(const data::Dataset& ds, numkit::Rng& rng, bool stratified);

// Train/test split of one rotation, standardised with statistics of the
// training rows only.
struct FoldData {
    data::Dataset train;
    data::Dataset test;
    data::Standardizer transform;
};

FoldData prepare_fold(const data::Dataset& ds, const FoldPlan& plan, std::size_t fold);

struct CandidateOutcome {
    double train_accuracy = 0.0;  // selection score on the training folds
    double test_accuracy = 0.0;
    std::vector<autoenc::EpochLoss> history;
    std::vector<autoenc::EpochLoss> pretrain_history;
    bool depict_fallback = false;  // conv plan did not fit; the mlp variant was trained
};

/// Train one candidate on fold.train and score it.
///
/// Baselines fit on the training rows; the training score uses their own
/// assignments and the test fold is labelled by the fitted model. Deep
/// methods are trained on the training rows, then a fresh k-means runs on
/// the training embedding (score) and another on the test embedding.
CandidateOutcome evaluate_candidate(MethodId method, const FoldData& fold, const embed::MethodConfig& candidate,
                                    std::uint64_t seed, const ProtocolOptions& options = {});

// Baselines and DEC collapse the grid to its first entry.
std::vector<embed::MethodConfig> effective_grid(MethodId method, const std::vector<embed::MethodConfig>& grid);

// Index of the highest score, first one on ties; nullopt scores are failed candidates.
std::optional<std::size_t> select_candidate(const std::vector<std::optional<double>>& train_scores);

struct FoldRecord {
    std::size_t fold = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double accuracy = 0.0;
    std::size_t chosen_candidate = 0;
    std::optional<double> chosen_gamma;  // empty when the method has no gamma
    std::string error;                   // set when every candidate failed
};

struct EvalResult {
    MethodId method = MethodId::kmeans;
    std::string dataset;
    std::vector<FoldRecord> folds;
    std::vector<double> fold_accuracies;  // successful folds in fold order
    double mean = 0.0;
    double std = 0.0;  // population

    bool complete() const noexcept;
};

// Recomputes fold_accuracies, mean and std from `folds`.
EvalResult summarize(MethodId method, std::string dataset, std::vector<FoldRecord> folds);

/// Five rotations: train every candidate on four folds, select by training
/// accuracy, score the selected model on the held-out fold, average.
/// Candidate failures are recorded, never skipped silently.
EvalResult run_protocol(MethodId method, const data::Dataset& ds, const std::vector<embed::MethodConfig>& grid,
                        numkit::Rng& rng, const ProtocolOptions& options = {});

}  // namespace tabclust::eval
