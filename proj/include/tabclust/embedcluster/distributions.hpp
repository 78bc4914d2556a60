#pragma once

#include "tabclust/numkit/matrix.hpp"

namespace tabclust::embed {

using numkit::DenseMatrix;

// q_ij = (1 + ||z_i - mu_j||^2)^-1 / sum_j' (1 + ||z_i - mu_j'||^2)^-1
struct SoftAssignment {
    DenseMatrix q;
};

// p_ij = (q_ij^2 / f_j) / sum_j' (q_ij'^2 / f_j'),  f_j = sum_i q_ij
struct TargetDist {
    DenseMatrix p;
};

SoftAssignment soft_assign(const DenseMatrix& z, const DenseMatrix& centroids);
TargetDist target_distribution(const SoftAssignment& q);

// sum_ij p_ij log(p_ij / q_ij); zero-probability targets contribute nothing.
double kl_loss(const TargetDist& p, const SoftAssignment& q);

// recon_loss(x, xhat) + gamma * kl_loss(p, q)
double joint_loss(const DenseMatrix& x, const DenseMatrix& xhat, const TargetDist& p, const SoftAssignment& q,
                  double gamma);

struct ClusterGrads {
    DenseMatrix embedding;  // N x m
    DenseMatrix centroids;  // K x m
};

// Gradient of kl_loss(p, soft_assign(z, centroids)) with p held fixed.
ClusterGrads kl_gradient(const DenseMatrix& z, const DenseMatrix& centroids, const TargetDist& p);

}  // namespace tabclust::embed
