#include "support.hpp"

#include <fel/satcon.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace fel;

namespace {

Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

/// Uniform on the level-L cells of the diagonal y = x.
LatticeMeasure diagonal(int L) {
    std::vector<LatticeMeasure::Cell> cells;
    for (std::int64_t k = 0; k < (std::int64_t{1} << L); ++k) cells.push_back({{k, k, 0, 0}, 1.0});
    return LatticeMeasure(2, L, std::move(cells));
}

/// Uniform on the horizontal segment y = 1/2.
LatticeMeasure horizontal(int L) {
    std::vector<LatticeMeasure::Cell> cells;
    const std::int64_t y = std::int64_t{1} << (L - 1);
    for (std::int64_t k = 0; k < (std::int64_t{1} << L); ++k) cells.push_back({{k, y, 0, 0}, 1.0});
    return LatticeMeasure(2, L, std::move(cells));
}

Subspace diag_line() { return Subspace::line(v2(1, 1).normalized()); }

}  // namespace

TEST(Concentration, LineMeasureIsConcentratedOnItsLine) {
    const auto mu = diagonal(8);
    const auto c = is_concentrated(mu, diag_line(), 1e-3);
    EXPECT_TRUE(c.holds);
    EXPECT_NEAR(c.mass, 1.0, 1e-12);
    EXPECT_FALSE(is_concentrated(mu, Subspace::line(v2(1, -1).normalized()), 0.1).holds);
    EXPECT_TRUE(is_concentrated(mu, Subspace::full(2), 1e-9).holds);
    EXPECT_FALSE(is_concentrated(mu, Subspace::zero(2), 0.2).holds);
}

TEST(Concentration, DiracIsConcentratedOnZero) {
    const LatticeMeasure mu(2, 6, {{{10, 20, 0, 0}, 1.0}});
    EXPECT_TRUE(is_concentrated(mu, Subspace::zero(2), 1e-6).holds);
    const auto s = concentration_subspace(mu, 1e-7);
    EXPECT_EQ(s.V.dim(), 0);
}

TEST(Concentration, SubspaceOfDiagonalIsTheDiagonal) {
    const auto s = concentration_subspace(diagonal(8), 1e-7);
    EXPECT_EQ(s.V.dim(), 1);
    EXPECT_LT(sub_distance(s.V, diag_line()), 1e-6);
    EXPECT_THROW(concentration_subspace(diagonal(8), 0.01), std::domain_error);
}

TEST(Concentration, UniformCubeNeedsTheWholeSpace) {
    EXPECT_EQ(concentration_subspace(uniform_cube(2, 6), 1e-7).V.dim(), 2);
    EXPECT_EQ(minimal_concentration(uniform_cube(2, 6), 0.1).V.dim(), 2);
    EXPECT_EQ(minimal_concentration(diagonal(6), 0.1).V.dim(), 1);
}

TEST(Uniformity, SegmentIsUniformOnItsLine) {
    const auto mu = horizontal(10);
    EXPECT_TRUE(is_uniform(mu, Subspace::axes(2, {0}), 0.01, 8));
    EXPECT_FALSE(is_uniform(mu, Subspace::axes(2, {1}), 0.01, 8));
}

TEST(Saturation, DefectByHand) {
    const auto mu = horizontal(8);
    // dim V + H(pi mu)/m - H(mu)/m
    EXPECT_NEAR(saturation_defect(mu, Subspace::axes(2, {0}), 6), 1.0 + 0.0 - 1.0, 1e-12);
    EXPECT_NEAR(saturation_defect(mu, Subspace::axes(2, {1}), 6), 1.0 + 1.0 - 1.0, 1e-12);
    EXPECT_NEAR(saturation_defect(mu, Subspace::zero(2), 6), 0.0, 1e-12);
    EXPECT_NEAR(saturation_defect(uniform_cube(2, 6), Subspace::full(2), 6), 0.0, 1e-12);
    EXPECT_TRUE(is_saturated(mu, Subspace::axes(2, {0}), 0.0, 6));
    EXPECT_FALSE(is_saturated(mu, Subspace::axes(2, {1}), 0.5, 6));
}

TEST(Saturation, ProjectionEntropyOfCube) {
    EXPECT_NEAR(projection_entropy(uniform_cube(2, 6), Subspace::axes(2, {0}), 6), 1.0, 1e-12);
    EXPECT_NEAR(projection_entropy(uniform_cube(2, 6), Subspace::full(2), 6), 0.0, 1e-12);
}

TEST(Saturation, SubspaceOfCubeIsFull) {
    EXPECT_EQ(saturation_subspace(uniform_cube(2, 8), 8).V.dim(), 2);
    const auto s = saturation_subspace(horizontal(10), 8);
    EXPECT_EQ(s.V.dim(), 1);
    EXPECT_LT(sub_distance(s.V, Subspace::axes(2, {0})), 1e-9);
}

TEST(KV, DeltasAreMonotoneAndBoundHolds) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const auto mu = fel::testing::random_measure(rng, 1, 10, 30);
        const auto nu = fel::testing::random_measure(rng, 1, 10, 5, 4);
        const auto r = kv_check(mu, nu, 4, 8);
        EXPECT_TRUE(r.monotone);
        EXPECT_EQ(r.deltas.size(), 4u);
        EXPECT_LE(r.lhs, r.rhs);
        EXPECT_NEAR(r.slack, r.rhs - r.lhs, 1e-15);
    }
    EXPECT_THROW(kv_check(uniform_cube(1, 4), uniform_cube(1, 4), 0, 2), std::invalid_argument);
}

TEST(Covariance, LineMeasureConcentratesOnTopEigenspace) {
    const auto c = covariance_concentration_check(diagonal(8), 1);
    EXPECT_LT(sub_distance(c.V, diag_line()), 1e-9);
    EXPECT_TRUE(c.holds);
    EXPECT_NEAR(c.mass, 1.0, 1e-12);
}

TEST(Covariance, FullRankIsTrivial) {
    const auto c = covariance_concentration_check(uniform_cube(2, 5), 2);
    EXPECT_EQ(c.V.dim(), 2);
    EXPECT_DOUBLE_EQ(c.eps, 0.0);
    EXPECT_TRUE(c.holds);
}

TEST(NonAffine, LineMeasureFailsAndSpreadMeasurePasses) {
    const auto line = non_affine_check(diagonal(8), 0.5, 0.01);
    EXPECT_FALSE(line.holds);
    EXPECT_GE(line.worst_mass, 0.99);
    EXPECT_TRUE(non_affine_check(uniform_cube(2, 6), 0.5, 0.01).holds);
}

TEST(NonAffine, TriangleIsSigmaIndependent) {
    const std::vector<Vec> tri{v2(0, 0), v2(1, 0), v2(0.5, std::sqrt(3.0) / 2)};
    // Each vertex sits at height sqrt(3)/2 above the opposite side.
    EXPECT_TRUE(sigma_independent(tri, 0.86));
    EXPECT_FALSE(sigma_independent(tri, 0.87));
    EXPECT_FALSE(sigma_independent({v2(0, 0), v2(1, 1), v2(2, 2)}, 1e-6));
    AffineSubspace A{v2(0, 1), Subspace::axes(2, {0})};
    EXPECT_NEAR(affine_distance(v2(5, 4), A), 3.0, 1e-12);
}
