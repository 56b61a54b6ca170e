#include "mlpbench/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "mlpbench/errors.hpp"

namespace mlpbench {

namespace {

void require_nonempty(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be at least 1x1, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " + b.shape_string());
    }
}

constexpr std::size_t kTile = 64;

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols) {
    require_nonempty(rows, cols);
    data_.assign(rows * cols, fill);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    require_nonempty(rows, cols);
    if (data_.size() != rows * cols) {
        throw ShapeError("matrix data length " + std::to_string(data_.size()) + " does not match " +
                         shape_string());
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    require_nonempty(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw ShapeError("ragged initializer: expected " + std::to_string(cols_) + " columns, got " +
                             std::to_string(r.size()));
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::slice_rows(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > rows_) {
        throw ShapeError("row slice [" + std::to_string(first) + ", " + std::to_string(first + count) +
                         ") out of range for " + shape_string());
    }
    const auto begin = data_.begin() + static_cast<std::ptrdiff_t>(first * cols_);
    return Matrix(count, cols_, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count * cols_)));
}

std::string Matrix::shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

Matrix mat_mul(const Matrix& a, const Matrix& b, MatMulKernel kernel) {
    if (a.cols() != b.rows()) {
        throw ShapeError("mat_mul: inner dimensions differ, " + a.shape_string() + " * " + b.shape_string());
    }
    const std::size_t n = a.rows();
    const std::size_t inner = a.cols();
    const std::size_t m = b.cols();
    Matrix out(n, m);
    const double* pa = a.data().data();
    const double* pb = b.data().data();
    double* po = out.data().data();

    if (kernel == MatMulKernel::Naive) {
        for (std::size_t i = 0; i < n; ++i) {
            double* orow = po + i * m;
            for (std::size_t k = 0; k < inner; ++k) {
                const double aik = pa[i * inner + k];
                const double* brow = pb + k * m;
                for (std::size_t j = 0; j < m; ++j) orow[j] += aik * brow[j];
            }
        }
        return out;
    }

    for (std::size_t i0 = 0; i0 < n; i0 += kTile) {
        const std::size_t i1 = std::min(i0 + kTile, n);
        for (std::size_t k0 = 0; k0 < inner; k0 += kTile) {
            const std::size_t k1 = std::min(k0 + kTile, inner);
            for (std::size_t j0 = 0; j0 < m; j0 += kTile) {
                const std::size_t j1 = std::min(j0 + kTile, m);
                for (std::size_t i = i0; i < i1; ++i) {
                    double* orow = po + i * m;
                    for (std::size_t k = k0; k < k1; ++k) {
                        const double aik = pa[i * inner + k];
                        const double* brow = pb + k * m;
                        for (std::size_t j = j0; j < j1; ++j) orow[j] += aik * brow[j];
                    }
                }
            }
        }
    }
    return out;
}

Matrix mat_mul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("mat_mul_at_b: row counts differ, " + a.shape_string() + "ᵀ * " + b.shape_string());
    }
    const std::size_t n = a.rows();
    const std::size_t p = a.cols();
    const std::size_t m = b.cols();
    Matrix out(p, m);
    double* po = out.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        const auto arow = a.row(i);
        const auto brow = b.row(i);
        for (std::size_t r = 0; r < p; ++r) {
            const double ar = arow[r];
            double* orow = po + r * m;
            for (std::size_t c = 0; c < m; ++c) orow[c] += ar * brow[c];
        }
    }
    return out;
}

Matrix mat_mul_a_bt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("mat_mul_a_bt: column counts differ, " + a.shape_string() + " * " + b.shape_string() +
                         "ᵀ");
    }
    const std::size_t n = a.rows();
    const std::size_t m = b.rows();
    const std::size_t inner = a.cols();
    Matrix out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        const auto arow = a.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            const auto brow = b.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < inner; ++k) acc += arow[k] * brow[k];
            out(i, j) = acc;
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix out = a;
    auto o = out.data();
    const auto pb = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] *= pb[i];
    return out;
}

Matrix col_sum(const Matrix& a) {
    Matrix out(1, a.cols());
    auto o = out.data();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) o[j] += r[j];
    }
    return out;
}

Matrix col_mean(const Matrix& a) {
    // running mean: a column of identical values yields that value exactly
    Matrix out(1, a.cols());
    auto o = out.data();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        const double count = static_cast<double>(i + 1);
        for (std::size_t j = 0; j < a.cols(); ++j) o[j] += (r[j] - o[j]) / count;
    }
    return out;
}

void add_row_broadcast(Matrix& a, const Matrix& bias) {
    if (bias.rows() != 1 || bias.cols() != a.cols()) {
        throw ShapeError("bias broadcast: expected 1x" + std::to_string(a.cols()) + ", got " + bias.shape_string());
    }
    const auto pb = bias.data();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] += pb[j];
    }
}

void add_in_place(Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add_in_place");
    auto pa = a.data();
    const auto pb = b.data();
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] += pb[i];
}

void subtract_scaled(Matrix& a, double scale, const Matrix& b) {
    require_same_shape(a, b, "subtract_scaled");
    auto pa = a.data();
    const auto pb = b.data();
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] -= scale * pb[i];
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    const auto pa = a.data();
    const auto pb = b.data();
    for (std::size_t i = 0; i < pa.size(); ++i) worst = std::max(worst, std::abs(pa[i] - pb[i]));
    return worst;
}

}  // namespace mlpbench
