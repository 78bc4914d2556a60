#pragma once

#include <vector>

#include "tabclust/dataio/dataset.hpp"

namespace tabclust::data {

// Per-column z-score fitted on one set of rows and reusable on others.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;        // population std, 1 for zero-variance columns
    std::vector<bool> zero_variance;  // those columns are only mean-centred

    static Standardizer fit(const DenseMatrix& x);
    DenseMatrix apply(const DenseMatrix& x) const;
    bool any_zero_variance() const;
};

struct StandardizeResult {
    Dataset dataset;
    Standardizer transform;
};

// Requires N >= 2.
StandardizeResult standardize(const Dataset& ds);

}  // namespace tabclust::data
