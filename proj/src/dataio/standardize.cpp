#include "tabclust/dataio/standardize.hpp"

#include <algorithm>
#include <cmath>

#include "tabclust/errors.hpp"

namespace tabclust::data {

Standardizer Standardizer::fit(const DenseMatrix& x) {
    if (x.rows() < 2) throw InvalidArgument("standardize: need at least two rows");
    const auto n = static_cast<double>(x.rows());
    Standardizer s;
    s.mean = numkit::column_sums(x);
    for (double& m : s.mean) m /= n;
    std::vector<double> var(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double d = x(r, c) - s.mean[c];
            var[c] += d * d;
        }
    }
    s.scale.resize(x.cols());
    s.zero_variance.resize(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const double sd = std::sqrt(var[c] / n);
        const bool flat = sd <= 1e-12 * std::max(1.0, std::abs(s.mean[c]));
        s.zero_variance[c] = flat;
        s.scale[c] = flat ? 1.0 : sd;
    }
    return s;
}

DenseMatrix Standardizer::apply(const DenseMatrix& x) const {
    if (x.cols() != mean.size()) throw DimensionMismatch("standardize: column count differs from fitted transform");
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
    }
    return out;
}

bool Standardizer::any_zero_variance() const {
    return std::find(zero_variance.begin(), zero_variance.end(), true) != zero_variance.end();
}

StandardizeResult standardize(const Dataset& ds) {
    StandardizeResult r{ds, Standardizer::fit(ds.x)};
    r.dataset.x = r.transform.apply(ds.x);
    return r;
}

}  // namespace tabclust::data
