#include "tabclust/evalkit/folds.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::eval {

std::size_t FoldPlan::n() const noexcept {
    std::size_t total = 0;
    for (const auto& f : folds) total += f.size();
    return total;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        if (f != fold) out.insert(out.end(), folds[f].begin(), folds[f].end());
    }
    return out;
}

void FoldPlan::validate(std::size_t n) const {
    if (folds.size() != kFoldCount) throw InvalidArgument("fold plan: expected 5 folds");
    std::vector<bool> seen(n, false);
    std::size_t lo = n, hi = 0;
    for (const auto& f : folds) {
        lo = std::min(lo, f.size());
        hi = std::max(hi, f.size());
        for (std::size_t i : f) {
            if (i >= n || seen[i]) throw InvalidArgument("fold plan: index " + std::to_string(i) + " repeated or out of range");
            seen[i] = true;
        }
    }
    if (this->n() != n) throw InvalidArgument("fold plan: folds do not cover every row");
    if (hi - lo > 1) throw InvalidArgument("fold plan: fold sizes differ by more than one");
}

FoldPlan make_folds(std::size_t n, numkit::Rng& rng) {
    if (n < kFoldCount) throw InvalidArgument("make_folds: need at least 5 rows, got " + std::to_string(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    FoldPlan plan;
    plan.folds.resize(kFoldCount);
    const std::size_t base = n / kFoldCount;
    const std::size_t extra = n % kFoldCount;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < kFoldCount; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        plan.folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                             order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return plan;
}

FoldPlan make_stratified_folds(std::span<const std::size_t> labels, numkit::Rng& rng) {
    const std::size_t n = labels.size();
    if (n < kFoldCount) throw InvalidArgument("make_folds: need at least 5 rows, got " + std::to_string(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
    FoldPlan plan;
    plan.folds.resize(kFoldCount);
    for (std::size_t p = 0; p < n; ++p) plan.folds[p % kFoldCount].push_back(order[p]);
    return plan;
}

}  // namespace tabclust::eval
