#include "tabclust/numkit/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "tabclust/errors.hpp"

namespace tabclust::numkit {

std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& loss,
                                     std::span<const double> params, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite_diff_grad: step must be positive");
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> grad(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double saved = p[i];
        p[i] = saved + h;
        const double up = loss(p);
        p[i] = saved - h;
        const double down = loss(p);
        p[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

double max_relative_error(std::span<const double> analytic, std::span<const double> numeric, double floor) {
    if (analytic.size() != numeric.size()) throw DimensionMismatch("max_relative_error: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
    }
    return worst;
}

}  // namespace tabclust::numkit
