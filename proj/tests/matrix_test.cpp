#include <linrem/matrix.hpp>

#include <gtest/gtest.h>

using linrem::Elt;
using linrem::Matrix;
using linrem::make_field;

namespace {

Matrix from_rows(linrem::FieldPtr f, std::vector<std::vector<Elt>> rows, int cols) {
    Matrix m(f, static_cast<int>(rows.size()), cols);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

TEST(Matrix, RrefDropsProportionalRow) {
    auto f = make_field(5);
    auto m = from_rows(f, {{1, 1, 1}, {2, 2, 2}}, 3);
    auto rr = linrem::rref(m);
    EXPECT_EQ(rr.rank, 1);
    EXPECT_EQ(rr.pivots, std::vector<int>{0});
    auto want = from_rows(f, {{1, 1, 1}, {0, 0, 0}}, 3);
    EXPECT_TRUE(rr.reduced == want);
}

TEST(Matrix, RrefIsIdempotentAndNormalizesPivots) {
    auto f = make_field(5);
    auto m = from_rows(f, {{2, 0, 1, 1}, {0, 1, 1, 1}, {2, 1, 2, 2}}, 4);
    auto rr = linrem::rref(m);
    auto again = linrem::rref(rr.reduced);
    EXPECT_TRUE(rr.reduced == again.reduced);
    EXPECT_EQ(rr.rank, again.rank);
    for (int i = 0; i < rr.rank; ++i) EXPECT_EQ(rr.reduced.at(i, rr.pivots[i]), 1);
}

TEST(Matrix, KernelBasisExamples) {
    auto f = make_field(5);
    EXPECT_EQ(linrem::kernel_basis(Matrix::identity(f, 3)).cols(), 0);

    auto row = from_rows(f, {{1, 1, 1}}, 3);
    auto kb = linrem::kernel_basis(row);
    EXPECT_EQ(kb.cols(), 2);
    EXPECT_EQ(linrem::rank(kb), 2);
    EXPECT_TRUE(linrem::mat_mul(row, kb).is_zero());

    auto zero = Matrix(f, 1, 3);
    EXPECT_EQ(linrem::kernel_basis(zero).cols(), 3);
}

TEST(Matrix, KernelProductVanishesOnAssortedMatrices) {
    auto f7 = make_field(7);
    auto f4 = make_field(2, 2);
    std::vector<Matrix> cases = {
        from_rows(f7, {{1, 2, 3, 4}, {5, 6, 0, 1}}, 4),
        from_rows(f7, {{0, 0, 0}, {1, 4, 2}}, 3),
        from_rows(f4, {{1, 2, 3}, {2, 3, 1}}, 3),
        Matrix(f4, 2, 2),
    };
    for (const auto& m : cases) {
        auto kb = linrem::kernel_basis(m);
        EXPECT_TRUE(linrem::mat_mul(m, kb).is_zero());
        EXPECT_EQ(kb.cols(), m.cols() - linrem::rank(m));
        EXPECT_EQ(linrem::rank(kb), kb.cols());
        EXPECT_EQ(linrem::rank(m), linrem::rank(linrem::transpose(m)));
    }
}

TEST(Matrix, SolveParticular) {
    auto f = make_field(5);
    auto row = from_rows(f, {{1, 1, 1}}, 3);
    auto x = linrem::solve_particular(row, {2});
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(linrem::mat_vec(row, *x), std::vector<Elt>{2});

    auto zero = Matrix(f, 1, 3);
    EXPECT_FALSE(linrem::solve_particular(zero, {1}).has_value());
    EXPECT_TRUE(linrem::solve_particular(zero, {0}).has_value());
}

TEST(Matrix, PermuteAndSelect) {
    auto f = make_field(7);
    auto m = from_rows(f, {{1, 2, 3}, {4, 5, 6}}, 3);
    auto p = linrem::permute_cols(m, {1, 0, 2});
    EXPECT_EQ(p.at(0, 0), 2);
    EXPECT_EQ(p.at(0, 1), 1);
    EXPECT_EQ(p.at(1, 2), 6);
    EXPECT_THROW(linrem::permute_cols(m, {0, 0, 2}), std::invalid_argument);
    EXPECT_THROW(linrem::permute_cols(m, {0, 1}), std::invalid_argument);

    auto s = linrem::select_cols(m, {2, 0});
    EXPECT_EQ(s.cols(), 2);
    EXPECT_EQ(s.at(0, 0), 3);
    EXPECT_EQ(s.at(1, 1), 4);

    auto dr = linrem::drop_row(m, 0);
    EXPECT_EQ(dr.rows(), 1);
    EXPECT_EQ(dr.at(0, 0), 4);
    auto dc = linrem::drop_col(m, 1);
    EXPECT_EQ(dc.cols(), 2);
    EXPECT_EQ(dc.at(0, 1), 3);
}

TEST(Matrix, DimensionAndFieldMismatch) {
    auto f5 = make_field(5);
    auto f7 = make_field(7);
    auto a = from_rows(f5, {{1, 2}}, 2);
    auto b = from_rows(f5, {{1, 2, 3}}, 3);
    EXPECT_THROW(linrem::mat_mul(a, b), std::invalid_argument);
    auto c = from_rows(f7, {{1}, {2}}, 1);
    EXPECT_THROW(linrem::mat_mul(a, c), std::invalid_argument);
    EXPECT_THROW(a.at(0, 5), std::out_of_range);
    EXPECT_THROW(linrem::mat_vec(a, {1, 2, 3}), std::invalid_argument);
}

}  // namespace
