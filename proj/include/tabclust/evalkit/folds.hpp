#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tabclust/numkit/rng.hpp"

namespace tabclust::eval {

inline constexpr std::size_t kFoldCount = 5;

struct FoldPlan {
    std::vector<std::vector<std::size_t>> folds;  // kFoldCount disjoint lists covering 0..N-1

    std::size_t n() const noexcept;
    // Every index outside `fold`, in fold order.
    std::vector<std::size_t> train_indices(std::size_t fold) const;
    // Throws InvalidArgument if the plan is not a partition of 0..n-1.
    void validate(std::size_t n) const;
};

// Seeded shuffle, then a contiguous split; the first N mod 5 folds get one
// extra row. Throws InvalidArgument when N < 5.
FoldPlan make_folds(std::size_t n, numkit::Rng& rng);

// Shuffle, group by class (ascending label), then deal rows to folds in turn.
// Fold sizes still differ by at most one.
FoldPlan make_stratified_folds(std::span<const std::size_t> labels, numkit::Rng& rng);

}  // namespace tabclust::eval
