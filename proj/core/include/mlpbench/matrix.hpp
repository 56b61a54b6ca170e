#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mlpbench {

/// Dense row-major matrix of doubles. One training sample per row when used as a batch.
///
/// Always at least 1x1; `data().size() == rows() * cols()` holds for the lifetime of the object.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    /// Copy of rows [first, first + count).
    [[nodiscard]] Matrix slice_rows(std::size_t first, std::size_t count) const;

    /// "RxC", used in error messages.
    [[nodiscard]] std::string shape_string() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

enum class MatMulKernel { Naive, Blocked };

/// a * b. Naive is the reference i-k-j triple loop; Blocked tiles the loops and agrees with
/// Naive within 1e-12 for well-scaled inputs.
[[nodiscard]] Matrix mat_mul(const Matrix& a, const Matrix& b, MatMulKernel kernel = MatMulKernel::Naive);

/// aᵀ * b without materialising the transpose.
[[nodiscard]] Matrix mat_mul_at_b(const Matrix& a, const Matrix& b);

/// a * bᵀ without materialising the transpose.
[[nodiscard]] Matrix mat_mul_a_bt(const Matrix& a, const Matrix& b);

[[nodiscard]] Matrix transpose(const Matrix& a);
[[nodiscard]] Matrix hadamard(const Matrix& a, const Matrix& b);

/// 1 x cols matrix of per-column means.
[[nodiscard]] Matrix col_mean(const Matrix& a);
/// 1 x cols matrix of per-column sums.
[[nodiscard]] Matrix col_sum(const Matrix& a);

/// Adds the 1 x cols row vector `bias` to every row of `a` in place.
void add_row_broadcast(Matrix& a, const Matrix& bias);

/// a += b, elementwise, in place.
void add_in_place(Matrix& a, const Matrix& b);

/// a -= scale * b, elementwise, in place.
void subtract_scaled(Matrix& a, double scale, const Matrix& b);

/// Largest |a - b| over all entries; shapes must match.
[[nodiscard]] double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace mlpbench
