#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tabclust::eval {

// counts[a][b] = number of samples with predicted label a and true label b.
using CountMatrix = std::vector<std::vector<std::size_t>>;

// Throws InvalidArgument on unequal lengths or a label outside [0, k).
CountMatrix contingency(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred, std::size_t k);

/// Percentage of samples labelled correctly under the best one-to-one
/// mapping from predicted clusters to classes, found by Hungarian matching
/// on the contingency table. Returns 100 * matched / N.
double cluster_accuracy(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred, std::size_t k);

}  // namespace tabclust::eval
