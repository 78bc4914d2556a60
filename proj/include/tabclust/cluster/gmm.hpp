#pragma once

#include <cstddef>
#include <vector>

#include "tabclust/numkit/matrix.hpp"
#include "tabclust/numkit/rng.hpp"

namespace tabclust::cluster {

using numkit::DenseMatrix;

inline constexpr double kDefaultVarFloor = 1e-6;

// Diagonal-covariance Gaussian mixture.
struct GmmModel {
    std::vector<double> weights;    // K, sums to 1
    DenseMatrix means;              // K x m
    DenseMatrix variances;          // K x m, every entry >= var_floor
    DenseMatrix responsibilities;   // N x K for the training rows
    double log_likelihood = 0.0;    // total (summed over rows), natural log
    std::vector<double> log_likelihood_history;  // one entry per E-step of the winning restart
    std::size_t iterations = 0;
};

struct GmmOptions {
    std::size_t max_iter = 300;
    double tol = 1e-6;
    std::size_t n_restarts = 10;
    double var_floor = kDefaultVarFloor;
};

// EM from a k-means initialisation, best log-likelihood over restarts.
// Throws DegenerateData if a feature column is constant over all rows.
GmmModel gmm_fit(const DenseMatrix& x, std::size_t k, numkit::Rng& rng, const GmmOptions& options = {});

// log w_k + log N(x_i | mu_k, diag(var_k)), N x K.
DenseMatrix gmm_log_joint(const GmmModel& model, const DenseMatrix& x);

// Argmax posterior; ties go to the lowest component index.
std::vector<std::size_t> gmm_predict(const GmmModel& model, const DenseMatrix& x);

}  // namespace tabclust::cluster
