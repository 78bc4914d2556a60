#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tabclust::numkit {

// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {values_.data() + r * cols_, cols_}; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    bool all_finite() const noexcept;
    void fill(double v) noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

// C = A * B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// C = A^T * B
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
// C = A * B^T
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);

void add_row_vector(DenseMatrix& m, std::span<const double> v);
std::vector<double> column_sums(const DenseMatrix& m);

DenseMatrix select_rows(const DenseMatrix& m, std::span<const std::size_t> rows);

// Appends zero columns until the matrix has `cols` columns.
DenseMatrix pad_columns(const DenseMatrix& m, std::size_t cols);

// D(i, j) = ||a_i - b_j||^2, accumulated per coordinate (no expansion trick).
DenseMatrix squared_distances(const DenseMatrix& a, const DenseMatrix& b);

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace tabclust::numkit
