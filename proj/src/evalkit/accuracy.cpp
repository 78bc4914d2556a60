#include "tabclust/evalkit/accuracy.hpp"

#include <string>

#include "tabclust/errors.hpp"
#include "tabclust/evalkit/hungarian.hpp"

namespace tabclust::eval {

CountMatrix contingency(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred, std::size_t k) {
    if (y_true.size() != y_pred.size()) {
        throw InvalidArgument("contingency: " + std::to_string(y_true.size()) + " true labels vs " +
                              std::to_string(y_pred.size()) + " predicted");
    }
    CountMatrix counts(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] >= k || y_pred[i] >= k) {
            throw InvalidArgument("contingency: label out of range [0, " + std::to_string(k) + ") at sample " +
                                  std::to_string(i));
        }
        ++counts[y_pred[i]][y_true[i]];
    }
    return counts;
}

double cluster_accuracy(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred, std::size_t k) {
    const CountMatrix counts = contingency(y_true, y_pred, k);
    if (y_true.empty()) throw InvalidArgument("cluster_accuracy: no samples");
    numkit::DenseMatrix reward(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) reward(a, b) = static_cast<double>(counts[a][b]);
    }
    const auto perm = hungarian_match(reward, true);
    std::size_t matched = 0;
    for (std::size_t a = 0; a < k; ++a) matched += counts[a][perm[a]];
    return 100.0 * static_cast<double>(matched) / static_cast<double>(y_true.size());
}

}  // namespace tabclust::eval
