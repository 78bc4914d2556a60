#include "tabclust/embedcluster/distributions.hpp"

#include <cmath>
#include <string>

#include "tabclust/autoenc/autoencoder.hpp"
#include "tabclust/errors.hpp"

namespace tabclust::embed {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

// w_ij = (1 + ||z_i - mu_j||^2)^-1
DenseMatrix student_kernel(const DenseMatrix& z, const DenseMatrix& centroids) {
    if (centroids.rows() == 0) throw InvalidArgument("soft_assign: no centroids");
    if (z.cols() != centroids.cols()) {
        throw DimensionMismatch("soft_assign: embedding has " + std::to_string(z.cols()) +
                                " columns, centroids have " + std::to_string(centroids.cols()));
    }
    DenseMatrix w = numkit::squared_distances(z, centroids);
    for (double& v : w.values()) v = 1.0 / (1.0 + v);
    return w;
}

}  // namespace

SoftAssignment soft_assign(const DenseMatrix& z, const DenseMatrix& centroids) {
    DenseMatrix q = student_kernel(z, centroids);
    for (std::size_t i = 0; i < q.rows(); ++i) {
        auto row = q.row(i);
        double s = 0.0;
        for (double v : row) s += v;
        for (double& v : row) v /= s;
    }
    return {std::move(q)};
}

TargetDist target_distribution(const SoftAssignment& sa) {
    const DenseMatrix& q = sa.q;
    const std::vector<double> f = numkit::column_sums(q);
    DenseMatrix p(q.rows(), q.cols());
    for (std::size_t i = 0; i < q.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < q.cols(); ++j) {
            p(i, j) = q(i, j) * q(i, j) / f[j];
            s += p(i, j);
        }
        for (std::size_t j = 0; j < q.cols(); ++j) p(i, j) /= s;
    }
    return {std::move(p)};
}

double kl_loss(const TargetDist& p, const SoftAssignment& q) {
    require_same_shape(p.p, q.q, "kl_loss");
    double s = 0.0;
    const auto pv = p.p.values();
    const auto qv = q.q.values();
    for (std::size_t i = 0; i < pv.size(); ++i) {
        if (pv[i] > 0.0) s += pv[i] * std::log(pv[i] / qv[i]);
    }
    return s;
}

double joint_loss(const DenseMatrix& x, const DenseMatrix& xhat, const TargetDist& p, const SoftAssignment& q,
                  double gamma) {
    return autoenc::recon_loss(x, xhat) + gamma * kl_loss(p, q);
}

ClusterGrads kl_gradient(const DenseMatrix& z, const DenseMatrix& centroids, const TargetDist& target) {
    const DenseMatrix w = student_kernel(z, centroids);
    require_same_shape(target.p, w, "kl_gradient");
    const std::size_t n = z.rows();
    const std::size_t k = centroids.rows();
    const std::size_t m = z.cols();
    ClusterGrads g{DenseMatrix(n, m, 0.0), DenseMatrix(k, m, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        double r = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            s += w(i, j);
            r += target.p(i, j);
        }
        auto zi = z.row(i);
        auto gz = g.embedding.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            // dL/dd_ij = w_ij (p_ij - r_i q_ij), d_ij = ||z_i - mu_j||^2
            const double coef = 2.0 * w(i, j) * (target.p(i, j) - r * w(i, j) / s);
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
