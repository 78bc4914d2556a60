#include "tabclust/dataio/synth.hpp"

#include <cmath>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::data {

namespace {

constexpr int kPlacementAttempts = 1000;
constexpr int kLayoutRestarts = 50;

}  // namespace

Dataset synth_blobs(std::size_t n, std::size_t dim, std::size_t k, double separation, double sigma, numkit::Rng& rng) {
    if (k < 1 || k > n) throw InvalidArgument("synth_blobs: K must lie in [1, N]");
    if (dim < 1) throw InvalidArgument("synth_blobs: dimension must be positive");
    if (!(separation > 0.0)) throw InvalidArgument("synth_blobs: separation must be positive");
    if (!(sigma >= 0.0)) throw InvalidArgument("synth_blobs: sigma must be non-negative");

    // A cube holding a lattice of ceil(K^(1/d)) points per side at twice the separation.
    const double per_side = std::ceil(std::pow(static_cast<double>(k), 1.0 / static_cast<double>(dim)) - 1e-9);
    const double side = 2.0 * separation * per_side;

    DenseMatrix centres(k, dim);
    bool placed = false;
    for (int restart = 0; restart < kLayoutRestarts && !placed; ++restart) {
        placed = true;
        for (std::size_t j = 0; j < k && placed; ++j) {
            bool ok = false;
            for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
                for (std::size_t c = 0; c < dim; ++c) centres(j, c) = rng.uniform(0.0, side);
                ok = true;
                for (std::size_t i = 0; i < j && ok; ++i) {
                    ok = numkit::squared_distance(centres.row(i), centres.row(j)) >= separation * separation;
                }
            }
            placed = ok;
        }
    }
    if (!placed) {
        throw InvalidArgument("synth_blobs: could not place " + std::to_string(k) + " centres " +
                              std::to_string(separation) + " apart in " + std::to_string(dim) + " dimensions");
    }

    Dataset ds;
    ds.name = "blobs";
    ds.k = k;
    ds.x = DenseMatrix(n, dim);
    ds.y.resize(n);
    for (std::size_t c = 0; c < dim; ++c) ds.feature_names.push_back("f" + std::to_string(c));
    for (std::size_t j = 0; j < k; ++j) ds.class_names.push_back(std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t label = i % k;
        ds.y[i] = label;
        for (std::size_t c = 0; c < dim; ++c) ds.x(i, c) = centres(label, c) + sigma * rng.normal();
    }
    return ds;
}

}  // namespace tabclust::data
