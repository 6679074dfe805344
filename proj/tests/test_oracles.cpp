#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace cssel;
using namespace testutil;

TEST(Oracle, Binomial) {
    EXPECT_EQ(oracle::binomial(4, 2), 6.0);
    EXPECT_EQ(oracle::binomial(10, 0), 1.0);
    EXPECT_EQ(oracle::binomial(3, 4), 0.0);
    EXPECT_NEAR(oracle::binomial(40, 20), 137846528820.0, 1.0);
}

TEST(Oracle, SubsetEnumerationOrder) {
    std::vector<std::vector<index_t>> seen;
    const auto n = oracle::for_each_subset(4, 2, [&](const std::vector<index_t>& s) { seen.push_back(s); });
    EXPECT_EQ(n, 6u);
    const std::vector<std::vector<index_t>> want{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    EXPECT_EQ(seen, want);
}

TEST(Oracle, SubsetLimits) {
    try {
        oracle::for_each_subset(60, 30, [](const std::vector<index_t>&) {});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::too_large);
    }
    EXPECT_THROW(oracle::for_each_subset(3, 0, [](const std::vector<index_t>&) {}), error);
}

TEST(Oracle, BestColumnsOnExample) {
    const auto A = example_5x4(1e-3);
    const auto o1 = oracle::best_columns_bruteforce(A, 1);
    EXPECT_EQ(o1.best_indices, std::vector<index_t>{0});
    EXPECT_EQ(o1.enumerated, 4u);
    const auto o2 = oracle::best_columns_bruteforce(A, 2);
    EXPECT_EQ(o2.best_indices, (std::vector<index_t>{1, 3}));
    EXPECT_EQ(o2.enumerated, 6u);
    EXPECT_NEAR(o2.best_value,
                oracle::fro_norm(oracle::projector_residual(A, A.select_cols(std::vector<index_t>{1, 3}))), 0.0);
}

TEST(Oracle, BestColumnsEnumeratesAll) {
    std::mt19937_64 g(1);
    const auto A = random_matrix(6, 7, g);
    for (index_t r = 1; r <= 6; ++r)
        EXPECT_EQ(oracle::best_columns_bruteforce(A, r).enumerated, static_cast<index_t>(oracle::binomial(7, r)));
}

TEST(Oracle, MaxVolumeOfIdentityBlock) {
    Matrix<double> V(3, 5);
    for (index_t i = 0; i < 3; ++i)
        V(i, i + 2) = 1.0;
    const auto o = oracle::max_volume_bruteforce(V, 3);
    EXPECT_EQ(o.best_indices, (std::vector<index_t>{2, 3, 4}));
    EXPECT_NEAR(o.best_value, 1.0, 1e-15);
    EXPECT_EQ(oracle::volume(V, {0, 2, 3}), 0.0);
}

TEST(Oracle, VolumeIsAbsDeterminantForSquare) {
    auto A = Matrix<double>::from_rows({{2, 1}, {1, 3}});
    EXPECT_NEAR(oracle::volume(A, {0, 1}), 5.0, 1e-13);
}

TEST(Oracle, PinvAndResiduals) {
    auto A = Matrix<double>::from_rows({{1, 0}, {0, 0}, {0, 2}});
    const auto P = oracle::pinv(A);
    EXPECT_NEAR(P(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(P(1, 2), 0.5, 1e-15);
    EXPECT_NEAR(P(0, 1), 0.0, 1e-15);
    const auto R = oracle::projector_residual(A, A.select_cols(std::vector<index_t>{0}));
    EXPECT_NEAR(oracle::fro_norm(R), 2.0, 1e-15);
    EXPECT_NEAR(oracle::fro_norm(oracle::skeleton_cross_residual(A, {0, 2}, {0, 1})), 0.0, 1e-15);
}

TEST(Oracle, BestRankErrors) {
    auto A = Matrix<double>::from_rows({{3, 0, 0}, {0, 2, 0}, {0, 0, 1}});
    EXPECT_NEAR(oracle::best_rank_fro(A, 1), std::sqrt(5.0), 1e-14);
    EXPECT_NEAR(oracle::best_rank_spec(A, 1), 2.0, 1e-14);
    EXPECT_EQ(oracle::best_rank_spec(A, 3), 0.0);
}

// fixtures

TEST(Fixtures, KahanSmall) {
    const double c = 0.6, s = 0.8;
    const auto K = kahan_matrix(2, c);
    EXPECT_DOUBLE_EQ(K(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(K(0, 1), -c);
    EXPECT_DOUBLE_EQ(K(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(K(1, 1), s);
}

TEST(Fixtures, KahanEntries) {
    const double c = 0.3, s = std::sqrt(1 - c * c);
    const auto K = kahan_matrix(5, c);
    for (index_t i = 0; i < 5; ++i)
        for (index_t j = 0; j < 5; ++j) {
            const double si = std::pow(s, static_cast<double>(i));
            const double want = j < i ? 0.0 : (j == i ? si : -c * si);
            EXPECT_NEAR(K(i, j), want, 1e-15);
        }
    for (index_t j = 0; j < 5; ++j)
        EXPECT_NEAR(column_norm<double>(std::span<const double>(K.col(j))), 1.0, 1e-14);
    EXPECT_THROW(kahan_matrix(3, 1.0), error);
}

TEST(Fixtures, Example5x4) {
    const auto A = example_5x4(0.25);
    const double want[5][4] = {{1, 1, 1, 0}, {1, 1, 1.25, 0}, {1, 0, 0, 1.25}, {1, 0, 0, 1}, {0, 0, 0, 1}};
    for (index_t i = 0; i < 5; ++i)
        for (index_t j = 0; j < 4; ++j)
            EXPECT_EQ(A(i, j), want[i][j]);
    const auto s = oracle::singular_values(example_5x4(0.0));
    EXPECT_LE(s[3], 1e-14);
}

TEST(Fixtures, Example5x4SingularValues) {
    const auto s = oracle::singular_values(example_5x4(1e-3));
    EXPECT_NEAR(s[0], 2.7074, 1e-4);
    EXPECT_NEAR(s[1], 1.8297, 1e-4);
    EXPECT_NEAR(s[2], 0.57111, 1e-5);
    EXPECT_NEAR(s[3], 4.9987e-4, 1e-8);
    EXPECT_NEAR(oracle::best_rank_fro(example_5x4(1e-3), 2), 0.5711151272, 1e-9);
}

TEST(Fixtures, OnesPlusEps) {
    const auto A = ones_plus_eps(4, 0.5);
    EXPECT_EQ(A(0, 0), 1.5);
    EXPECT_EQ(A(3, 2), 1.0);
    EXPECT_THROW(ones_plus_eps(1, 0.5), error);
}
