#include <gtest/gtest.h>

#include "mlpbench/errors.hpp"
#include "mlpbench/matrix.hpp"
#include "support/test_support.hpp"

namespace mlpbench {
namespace {

using testing::random_matrix;

TEST(Matrix, RejectsEmptyShapes) {
    EXPECT_THROW(Matrix(0, 3), ShapeError);
    EXPECT_THROW(Matrix(2, 0), ShapeError);
    EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
}

TEST(Matrix, DataLengthMatchesShape) {
    const Matrix m(3, 4, 1.5);
    EXPECT_EQ(m.data().size(), 12U);
    EXPECT_EQ(m.shape_string(), "3x4");
}

TEST(MatMul, TwoByTwo) {
    const Matrix a{{1, 2}, {3, 4}};
    const Matrix b{{5, 6}, {7, 8}};
    EXPECT_EQ(mat_mul(a, b), (Matrix{{19, 22}, {43, 50}}));
    EXPECT_EQ(testing::reference_mat_mul(a, b), (Matrix{{19, 22}, {43, 50}}));
}

TEST(MatMul, IdentityLeftAndRight) {
    SplitMix64 rng(3);
    for (std::size_t n = 1; n <= 6; ++n) {
        const Matrix a = random_matrix(3, n, rng);
        EXPECT_EQ(mat_mul(Matrix::identity(3), a), a);
        EXPECT_EQ(mat_mul(a, Matrix::identity(n)), a);
    }
}

TEST(MatMul, ShapeErrorNamesBothShapes) {
    try {
        (void)mat_mul(Matrix(2, 3), Matrix(2, 2));
        FAIL() << "expected ShapeError";
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("2x3"), std::string::npos);
        EXPECT_NE(msg.find("2x2"), std::string::npos);
    }
}

TEST(MatMul, MatchesReferenceOnRandomShapes) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.next() % 9, k = 1 + rng.next() % 9, m = 1 + rng.next() % 9;
        const Matrix a = random_matrix(n, k, rng, -10, 10);
        const Matrix b = random_matrix(k, m, rng, -10, 10);
        EXPECT_EQ(mat_mul(a, b), testing::reference_mat_mul(a, b));
    }
}

TEST(MatMul, BlockedAgreesWithNaive) {
    SplitMix64 rng(5);
    const Matrix a = random_matrix(130, 70, rng);
    const Matrix b = random_matrix(70, 129, rng);
    EXPECT_LE(max_abs_diff(mat_mul(a, b, MatMulKernel::Blocked), mat_mul(a, b)), 1e-12);
}

TEST(MatMul, TransposedProductsMatchExplicitTranspose) {
    SplitMix64 rng(8);
    const Matrix a = random_matrix(7, 4, rng);
    const Matrix b = random_matrix(7, 5, rng);
    const Matrix c = random_matrix(6, 4, rng);
    EXPECT_LE(max_abs_diff(mat_mul_at_b(a, b), mat_mul(transpose(a), b)), 1e-14);
    EXPECT_LE(max_abs_diff(mat_mul_a_bt(a, c), mat_mul(a, transpose(c))), 1e-14);
    EXPECT_THROW((void)mat_mul_at_b(a, c), ShapeError);
}

TEST(MatMul, TransposeOfProductProperty) {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.next() % 8, k = 1 + rng.next() % 8, m = 1 + rng.next() % 8;
        const Matrix a = random_matrix(n, k, rng, -10, 10);
        const Matrix b = random_matrix(k, m, rng, -10, 10);
        EXPECT_LE(max_abs_diff(transpose(mat_mul(a, b)), mat_mul(transpose(b), transpose(a))), 1e-12);
    }
}

TEST(Transpose, Cases) {
    EXPECT_EQ(transpose(Matrix{{5}}), (Matrix{{5}}));
    EXPECT_EQ(transpose(Matrix{{1, 2, 3}}), (Matrix{{1}, {2}, {3}}));
    SplitMix64 rng(1);
    const Matrix a = random_matrix(4, 7, rng);
    EXPECT_EQ(transpose(transpose(a)), a);
}

TEST(Hadamard, Cases) {
    SplitMix64 rng(2);
    const Matrix a = random_matrix(3, 5, rng);
    EXPECT_EQ(hadamard(a, Matrix(3, 5, 1.0)), a);
    EXPECT_EQ(hadamard(a, Matrix(3, 5, 0.0)), Matrix(3, 5, 0.0));
    EXPECT_EQ(hadamard(Matrix{{2, 3}}, Matrix{{4, 5}}), (Matrix{{8, 15}}));
    EXPECT_THROW((void)hadamard(Matrix(1, 2), Matrix(2, 1)), ShapeError);
}

TEST(ColMean, Cases) {
    EXPECT_EQ(col_mean(Matrix{{1, -2, 7}}), (Matrix{{1, -2, 7}}));
    EXPECT_EQ(col_mean(Matrix{{1}, {3}}), (Matrix{{2}}));
    EXPECT_EQ(col_mean(Matrix{{1, 2}, {3, 4}, {5, 6}}), (Matrix{{3, 4}}));
    EXPECT_EQ(col_sum(Matrix{{1, 2}, {3, 4}, {5, 6}}), (Matrix{{9, 12}}));
}

TEST(ColMean, StackedCopiesOfARowGiveThatRow) {
    SplitMix64 rng(4);
    for (std::size_t k = 1; k <= 9; ++k) {
        const Matrix r = random_matrix(1, 6, rng, -10, 10);
        Matrix stack(k, 6);
        for (std::size_t i = 0; i < k; ++i) std::copy(r.data().begin(), r.data().end(), stack.row(i).begin());
        EXPECT_EQ(col_mean(stack), r) << "k=" << k;
    }
}

TEST(Broadcast, AddsBiasToEveryRow) {
    Matrix a{{1, 2}, {3, 4}};
    add_row_broadcast(a, Matrix{{10, 20}});
    EXPECT_EQ(a, (Matrix{{11, 22}, {13, 24}}));
    EXPECT_THROW(add_row_broadcast(a, Matrix(1, 3)), ShapeError);
}

}  // namespace
}  // namespace mlpbench
