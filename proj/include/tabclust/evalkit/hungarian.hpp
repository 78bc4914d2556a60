#pragma once

#include <cstddef>
#include <vector>

#include "tabclust/numkit/matrix.hpp"

namespace tabclust::eval {

/// Optimal assignment on a square matrix. Returns perm with perm[row] = column,
/// maximising the total when `maximize` is set and minimising it otherwise.
/// O(K^3) shortest augmenting paths with row/column potentials.
/// Throws DimensionMismatch on a non-square matrix, InvalidArgument on
/// non-finite entries.
std::vector<std::size_t> hungarian_match(const numkit::DenseMatrix& matrix, bool maximize);

double assignment_total(const numkit::DenseMatrix& matrix, const std::vector<std::size_t>& perm);

}  // namespace tabclust::eval
