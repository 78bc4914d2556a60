#pragma once

#include <cstddef>

#include "tabclust/dataio/dataset.hpp"
#include "tabclust/numkit/rng.hpp"

namespace tabclust::data {

/// K isotropic Gaussian blobs (std `sigma`) whose centres are pairwise at
/// least `separation` apart. Row i belongs to class i mod K, so class sizes
/// differ by at most one. Centres are drawn uniformly from a cube sized to
/// fit K of them; placement is retried a bounded number of times before
/// throwing InvalidArgument.
Dataset synth_blobs(std::size_t n, std::size_t dim, std::size_t k, double separation, double sigma, numkit::Rng& rng);

}  // namespace tabclust::data
