#include "tabclust/cluster/kmeans.hpp"

#include <limits>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::cluster {

using numkit::squared_distance;

std::vector<std::size_t> nearest_centroid(const DenseMatrix& centroids, const DenseMatrix& x) {
    if (x.cols() != centroids.cols()) {
        throw DimensionMismatch("kmeans_assign: data has " + std::to_string(x.cols()) + " columns, centroids have " +
                                std::to_string(centroids.cols()));
    }
    std::vector<std::size_t> labels(x.rows(), 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < centroids.rows(); ++j) {
            const double d = squared_distance(x.row(i), centroids.row(j));
            if (d < best) {
                best = d;
                labels[i] = j;
            }
        }
    }
    return labels;
}

std::vector<std::size_t> kmeans_assign(const KMeansModel& model, const DenseMatrix& x) {
    return nearest_centroid(model.centroids, x);
}

double inertia(const DenseMatrix& x, const DenseMatrix& centroids, std::span<const std::size_t> assignments) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) s += squared_distance(x.row(i), centroids.row(assignments[i]));
    return s;
}

std::vector<std::size_t> kmeans_plus_plus(const DenseMatrix& x, std::size_t k, numkit::Rng& rng) {
    const std::size_t n = x.rows();
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    chosen.push_back(rng.uniform_index(n));
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x.row(i), x.row(chosen[0]));
    while (chosen.size() < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (target < acc && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            // Rounding can leave `target` past the last positive weight.
            while (d2[pick] == 0.0 && pick > 0) --pick;
        } else {
            pick = rng.uniform_index(n);
        }
        chosen.push_back(pick);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = squared_distance(x.row(i), x.row(pick));
            if (d < d2[i]) d2[i] = d;
        }
    }
    return chosen;
}

namespace {

void update_centroids(const DenseMatrix& x, std::span<const std::size_t> assignments, DenseMatrix& centroids) {
    const std::size_t k = centroids.rows();
    DenseMatrix sums(k, x.cols(), 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto dst = sums.row(assignments[i]);
        auto src = x.row(i);
        for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
        ++counts[assignments[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;  // empty cluster keeps its centroid
        auto dst = centroids.row(j);
        auto src = sums.row(j);
        for (std::size_t c = 0; c < src.size(); ++c) dst[c] = src[c] / static_cast<double>(counts[j]);
    }
}

}  // namespace

KMeansModel kmeans_lloyd(const DenseMatrix& x, DenseMatrix initial_centroids, std::size_t max_iter) {
    if (initial_centroids.cols() != x.cols()) throw DimensionMismatch("kmeans_lloyd: centroid dimension mismatch");
    KMeansModel m;
    m.centroids = std::move(initial_centroids);
    m.assignments = nearest_centroid(m.centroids, x);
    m.inertia_history.push_back(inertia(x, m.centroids, m.assignments));
    for (std::size_t it = 0; it < max_iter; ++it) {
        update_centroids(x, m.assignments, m.centroids);
        auto next = nearest_centroid(m.centroids, x);
        m.inertia_history.push_back(inertia(x, m.centroids, next));
        ++m.iterations;
        const bool fixpoint = next == m.assignments;
        m.assignments = std::move(next);
        if (fixpoint) break;
    }
    m.inertia = m.inertia_history.back();
    return m;
}

KMeansModel kmeans_fit(const DenseMatrix& x, std::size_t k, numkit::Rng& rng, std::size_t max_iter,
                       std::size_t n_restarts) {
    if (k < 1 || k > x.rows()) {
        throw InvalidArgument("kmeans_fit: K=" + std::to_string(k) + " must lie in [1, " + std::to_string(x.rows()) +
                              "]");
    }
    if (max_iter < 1 || n_restarts < 1) throw InvalidArgument("kmeans_fit: max_iter and n_restarts must be positive");
    if (!x.all_finite()) throw InvalidArgument("kmeans_fit: non-finite input");
    const std::uint64_t base = rng.next_u64();
    KMeansModel best;
    bool have = false;
    for (std::size_t r = 0; r < n_restarts; ++r) {
        numkit::Rng sub(numkit::Rng::derive(base, r));
        const auto seeds = kmeans_plus_plus(x, k, sub);
        KMeansModel m = kmeans_lloyd(x, numkit::select_rows(x, seeds), max_iter);
        if (!have || m.inertia < best.inertia) {
            best = std::move(m);
            have = true;
        }
    }
    return best;
}

}  // namespace tabclust::cluster
