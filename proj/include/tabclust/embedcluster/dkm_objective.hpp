#pragma once

#include "tabclust/embedcluster/distributions.hpp"

namespace tabclust::embed {

// s_ik = exp(-lambda d_ik) / sum_k' exp(-lambda d_ik'), d = squared distances.
DenseMatrix softmin_weights(const DenseMatrix& sq_dist, double inv_temperature);

// sum_i sum_k s_ik(lambda) ||z_i - mu_k||^2
double dkm_cluster_loss(const DenseMatrix& z, const DenseMatrix& centroids, double inv_temperature);

// Exact gradient, including the dependence of s on the distances.
ClusterGrads dkm_gradient(const DenseMatrix& z, const DenseMatrix& centroids, double inv_temperature);

}  // namespace tabclust::embed
