#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tabclust/numkit/matrix.hpp"
#include "tabclust/numkit/rng.hpp"

namespace tabclust::cluster {

using numkit::DenseMatrix;

struct KMeansModel {
    DenseMatrix centroids;                 // K x m
    std::vector<std::size_t> assignments;  // one per training row
    double inertia = 0.0;                  // sum of squared distances to the assigned centroid
    std::size_t iterations = 0;
    std::vector<double> inertia_history;   // after seeding, then after every Lloyd iteration (winning restart)
};

// Best-inertia model over `n_restarts` k-means++ seeded Lloyd runs. Restart r
// draws from Rng::derive(base, r) where base is one draw from `rng`; the
// winner is chosen by (inertia, restart index).
KMeansModel kmeans_fit(const DenseMatrix& x, std::size_t k, numkit::Rng& rng, std::size_t max_iter = 300,
                       std::size_t n_restarts = 10);

// Lloyd iterations from explicit starting centroids.
KMeansModel kmeans_lloyd(const DenseMatrix& x, DenseMatrix initial_centroids, std::size_t max_iter = 300);

// k-means++ seeding; returns the chosen row indices.
std::vector<std::size_t> kmeans_plus_plus(const DenseMatrix& x, std::size_t k, numkit::Rng& rng);

// Nearest centroid per row; ties go to the lowest cluster index.
std::vector<std::size_t> kmeans_assign(const KMeansModel& model, const DenseMatrix& x);
std::vector<std::size_t> nearest_centroid(const DenseMatrix& centroids, const DenseMatrix& x);

double inertia(const DenseMatrix& x, const DenseMatrix& centroids, std::span<const std::size_t> assignments);

}  // namespace tabclust::cluster
