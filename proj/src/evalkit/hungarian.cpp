#include "tabclust/evalkit/hungarian.hpp"

#include <algorithm>
#include <limits>

#include "tabclust/errors.hpp"

namespace tabclust::eval {

std::vector<std::size_t> hungarian_match(const numkit::DenseMatrix& matrix, bool maximize) {
    if (matrix.rows() != matrix.cols()) throw DimensionMismatch("hungarian_match: matrix must be square");
    if (!matrix.all_finite()) throw InvalidArgument("hungarian_match: non-finite entry");
    const std::size_t n = matrix.rows();
    if (n == 0) return {};

    const auto values = matrix.values();
    const double top = *std::max_element(values.begin(), values.end());
    const auto cost = [&](std::size_t i, std::size_t j) { return maximize ? top - matrix(i, j) : matrix(i, j); };

    // 1-based arrays; column 0 is the virtual start of each augmenting path.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

double assignment_total(const numkit::DenseMatrix& matrix, const std::vector<std::size_t>& perm) {
    if (perm.size() != matrix.rows()) throw DimensionMismatch("assignment_total: permutation size");
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += matrix(i, perm[i]);
    return total;
}

}  // namespace tabclust::eval
