#include "tabclust/numkit/matrix.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

#include "tabclust/errors.hpp"

namespace tabclust::numkit {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const RowMajor>;
using Map = Eigen::Map<RowMajor>;

MapC view(const DenseMatrix& m) {
    return MapC(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

Map view(DenseMatrix& m) {
    return Map(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

[[noreturn]] void mismatch(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
    throw DimensionMismatch(std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols) {
        throw DimensionMismatch("DenseMatrix: " + std::to_string(values_.size()) + " values for " +
                                std::to_string(rows) + "x" + std::to_string(cols));
    }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> values;
    values.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionMismatch("DenseMatrix::from_rows: ragged rows");
        values.insert(values.end(), row.begin(), row.end());
    }
    return DenseMatrix(r, c, std::move(values));
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void DenseMatrix::fill(double v) noexcept { std::fill(values_.begin(), values_.end(), v); }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) mismatch("matmul", a, b);
    DenseMatrix c(a.rows(), b.cols());
    if (c.empty()) return c;
    if (a.cols() == 0) return c;
    view(c).noalias() = view(a) * view(b);
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) mismatch("matmul_at_b", a, b);
    DenseMatrix c(a.cols(), b.cols());
    if (c.empty() || a.rows() == 0) return c;
    view(c).noalias() = view(a).transpose() * view(b);
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) mismatch("matmul_a_bt", a, b);
    DenseMatrix c(a.rows(), b.rows());
    if (c.empty() || a.cols() == 0) return c;
    view(c).noalias() = view(a) * view(b).transpose();
    return c;
}

void add_row_vector(DenseMatrix& m, std::span<const double> v) {
    if (v.size() != m.cols()) {
        throw DimensionMismatch("add_row_vector: vector of " + std::to_string(v.size()) + " for " +
                                std::to_string(m.cols()) + " columns");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] += v[c];
    }
}

std::vector<double> column_sums(const DenseMatrix& m) {
    std::vector<double> sums(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) sums[c] += row[c];
    }
    return sums;
}

DenseMatrix select_rows(const DenseMatrix& m, std::span<const std::size_t> rows) {
    DenseMatrix out(rows.size(), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= m.rows()) throw InvalidArgument("select_rows: row index out of range");
        auto src = m.row(rows[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

DenseMatrix pad_columns(const DenseMatrix& m, std::size_t cols) {
    if (cols < m.cols()) throw InvalidArgument("pad_columns: cannot shrink");
    DenseMatrix out(m.rows(), cols, 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto src = m.row(r);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

DenseMatrix squared_distances(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) mismatch("squared_distances", a, b);
    DenseMatrix d(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) d(i, j) = squared_distance(a.row(i), b.row(j));
    }
    return d;
}

}  // namespace tabclust::numkit
