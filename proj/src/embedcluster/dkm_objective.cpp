#include "tabclust/embedcluster/dkm_objective.hpp"

#include <algorithm>
#include <cmath>

#include "tabclust/errors.hpp"

namespace tabclust::embed {

DenseMatrix softmin_weights(const DenseMatrix& d, double inv_temperature) {
    if (!(inv_temperature > 0.0)) throw InvalidArgument("softmin: inverse temperature must be positive");
    DenseMatrix s(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.rows(); ++i) {
        auto row = d.row(i);
        const double mn = *std::min_element(row.begin(), row.end());
        double total = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            s(i, k) = std::exp(-inv_temperature * (row[k] - mn));
            total += s(i, k);
        }
        for (std::size_t k = 0; k < row.size(); ++k) s(i, k) /= total;
    }
    return s;
}

double dkm_cluster_loss(const DenseMatrix& z, const DenseMatrix& centroids, double inv_temperature) {
    const DenseMatrix d = numkit::squared_distances(z, centroids);
    const DenseMatrix s = softmin_weights(d, inv_temperature);
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) total += s.values()[i] * d.values()[i];
    return total;
}

ClusterGrads dkm_gradient(const DenseMatrix& z, const DenseMatrix& centroids, double inv_temperature) {
    const DenseMatrix d = numkit::squared_distances(z, centroids);
    const DenseMatrix s = softmin_weights(d, inv_temperature);
    const std::size_t n = z.rows();
    const std::size_t k = centroids.rows();
    const std::size_t m = z.cols();
    ClusterGrads g{DenseMatrix(n, m, 0.0), DenseMatrix(k, m, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        double mean_d = 0.0;
        for (std::size_t j = 0; j < k; ++j) mean_d += s(i, j) * d(i, j);
        auto zi = z.row(i);
        auto gz = g.embedding.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            // dC/dd_ij = s_ij (1 - lambda (d_ij - sum_k s_ik d_ik))
            const double coef = 2.0 * s(i, j) * (1.0 - inv_temperature * (d(i, j) - mean_d));
            auto mu = centroids.row(j);
            auto gm = g.centroids.row(j);
            for (std::size_t c = 0; c < m; ++c) {
                const double t = coef * (zi[c] - mu[c]);
                gz[c] += t;
                gm[c] -= t;
            }
        }
    }
    return g;
}

}  // namespace tabclust::embed
