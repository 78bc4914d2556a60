#include "tabclust/cluster/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tabclust/cluster/kmeans.hpp"
#include "tabclust/errors.hpp"

namespace tabclust::cluster {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Per-column population variance over all rows.
std::vector<double> column_variances(const DenseMatrix& x) {
    const auto n = static_cast<double>(x.rows());
    std::vector<double> mean = numkit::column_sums(x);
    for (double& m : mean) m /= n;
    std::vector<double> var(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double d = x(i, c) - mean[c];
            var[c] += d * d;
        }
    }
    for (double& v : var) v /= n;
    return var;
}

GmmModel init_from_kmeans(const DenseMatrix& x, const KMeansModel& km, const std::vector<double>& global_var,
                          double var_floor) {
    const std::size_t k = km.centroids.rows();
    const std::size_t m = x.cols();
    GmmModel g;
    g.means = km.centroids;
    g.variances = DenseMatrix(k, m, 0.0);
    std::vector<double> counts(k, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const std::size_t j = km.assignments[i];
        counts[j] += 1.0;
        for (std::size_t c = 0; c < m; ++c) {
            const double d = x(i, c) - g.means(j, c);
            g.variances(j, c) += d * d;
        }
    }
    double total = 0.0;
    g.weights.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        g.weights[j] = std::max(counts[j], 1.0);
        total += g.weights[j];
        for (std::size_t c = 0; c < m; ++c) {
            double v = counts[j] >= 2.0 ? g.variances(j, c) / counts[j] : global_var[c];
            g.variances(j, c) = std::max(v, var_floor);
        }
    }
    for (double& w : g.weights) w /= total;
    return g;
}

// Fills responsibilities, returns the total log-likelihood.
double e_step(GmmModel& g, const DenseMatrix& x) {
    DenseMatrix lj = gmm_log_joint(g, x);
    const std::size_t k = g.weights.size();
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto row = lj.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += std::exp(row[j] - mx);
        const double lse = mx + std::log(s);
        for (std::size_t j = 0; j < k; ++j) row[j] = std::exp(row[j] - lse);
        total += lse;
    }
    g.responsibilities = std::move(lj);
    return total;
}

void m_step(GmmModel& g, const DenseMatrix& x, double var_floor) {
    const std::size_t k = g.weights.size();
    const std::size_t m = x.cols();
    const auto n = static_cast<double>(x.rows());
    const DenseMatrix& r = g.responsibilities;
    std::vector<double> nk = numkit::column_sums(r);
    DenseMatrix sums = numkit::matmul_at_b(r, x);  // K x m
    for (std::size_t j = 0; j < k; ++j) {
        g.weights[j] = nk[j] / n;
        if (nk[j] <= 0.0) continue;  // dead component: parameters are irrelevant
        for (std::size_t c = 0; c < m; ++c) g.means(j, c) = sums(j, c) / nk[j];
    }
    DenseMatrix sq(k, m, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double rij = r(i, j);
            if (rij == 0.0) continue;
            for (std::size_t c = 0; c < m; ++c) {
                const double d = x(i, c) - g.means(j, c);
                sq(j, c) += rij * d * d;
            }
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (nk[j] <= 0.0) continue;
        for (std::size_t c = 0; c < m; ++c) g.variances(j, c) = std::max(sq(j, c) / nk[j], var_floor);
    }
}

}  // namespace

DenseMatrix gmm_log_joint(const GmmModel& model, const DenseMatrix& x) {
    const std::size_t k = model.weights.size();
    if (x.cols() != model.means.cols()) {
        throw DimensionMismatch("gmm: data has " + std::to_string(x.cols()) + " columns, model has " +
                                std::to_string(model.means.cols()));
    }
    std::vector<double> log_norm(k);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < x.cols(); ++c) s += kLog2Pi + std::log(model.variances(j, c));
        log_norm[j] = std::log(model.weights[j]) - 0.5 * s;
    }
    DenseMatrix out(x.rows(), k);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double q = 0.0;
            for (std::size_t c = 0; c < x.cols(); ++c) {
                const double d = x(i, c) - model.means(j, c);
                q += d * d / model.variances(j, c);
            }
            out(i, j) = log_norm[j] - 0.5 * q;
        }
    }
    return out;
}

std::vector<std::size_t> gmm_predict(const GmmModel& model, const DenseMatrix& x) {
    const DenseMatrix lj = gmm_log_joint(model, x);
    std::vector<std::size_t> labels(x.rows(), 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < lj.cols(); ++j) {
            if (lj(i, j) > best) {
                best = lj(i, j);
                labels[i] = j;
            }
        }
    }
    return labels;
}

GmmModel gmm_fit(const DenseMatrix& x, std::size_t k, numkit::Rng& rng, const GmmOptions& options) {
    if (k < 1 || k > x.rows()) {
        throw InvalidArgument("gmm_fit: K=" + std::to_string(k) + " must lie in [1, " + std::to_string(x.rows()) + "]");
    }
    if (options.max_iter < 1 || options.n_restarts < 1) {
        throw InvalidArgument("gmm_fit: max_iter and n_restarts must be positive");
    }
    if (!x.all_finite()) throw InvalidArgument("gmm_fit: non-finite input");
    const std::vector<double> global_var = column_variances(x);
    for (std::size_t c = 0; c < global_var.size(); ++c) {
        if (global_var[c] == 0.0) {
            throw DegenerateData("gmm_fit: feature column " + std::to_string(c) +
                                 " has zero variance; standardize or drop it");
        }
    }
    const auto n = static_cast<double>(x.rows());
    const std::uint64_t base = rng.next_u64();
    GmmModel best;
    bool have = false;
    for (std::size_t r = 0; r < options.n_restarts; ++r) {
        numkit::Rng sub(numkit::Rng::derive(base, r));
        const KMeansModel km = kmeans_fit(x, k, sub, 300, 1);
        GmmModel g = init_from_kmeans(x, km, global_var, options.var_floor);
        for (std::size_t it = 0; it < options.max_iter; ++it) {
            const double ll = e_step(g, x);
            g.log_likelihood_history.push_back(ll);
            g.log_likelihood = ll;
            g.iterations = it + 1;
            const auto& h = g.log_likelihood_history;
            if (h.size() >= 2 && (h.back() - h[h.size() - 2]) / n < options.tol) break;
            if (it + 1 == options.max_iter) break;
            m_step(g, x, options.var_floor);
        }
        if (!have || g.log_likelihood > best.log_likelihood) {
            best = std::move(g);
            have = true;
        }
    }
    return best;
}

}  // namespace tabclust::cluster
