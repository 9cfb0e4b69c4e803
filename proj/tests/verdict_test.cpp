#include <fel/satcon.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fel;

namespace {

LatticeMeasure horizontal(int L) {
    std::vector<LatticeMeasure::Cell> cells;
    const std::int64_t y = std::int64_t{1} << (L - 1);
    for (std::int64_t k = 0; k < (std::int64_t{1} << L); ++k) cells.push_back({{k, y, 0, 0}, 1.0});
    return LatticeMeasure(2, L, std::move(cells));
}

}  // namespace

TEST(InverseVerdict, UniformPairPassesWithFullDimension) {
    const auto mu = uniform_cube(1, 12);
    const auto v = inverse_verdict(mu, mu, 6, 0.2, 4);
    EXPECT_TRUE(v.passed);
    EXPECT_EQ(v.subspaces.size(), 7u);
    EXPECT_NEAR(v.mean_dim, 1.0, 1e-12);
    EXPECT_NEAR(v.growth, 0.0, 0.2);
}

TEST(InverseVerdict, DiracPartnerPasses) {
    const auto mu = uniform_cube(1, 10);
    const LatticeMeasure nu(1, 10, {{{0, 0, 0, 0}, 1.0}});
    const auto v = inverse_verdict(mu, nu, 5, 0.2, 4);
    EXPECT_TRUE(v.passed);
    EXPECT_NEAR(v.growth, 0.0, 1e-12);
}

TEST(InverseVerdict, SegmentsPickTheirDirection) {
    const auto mu = horizontal(10);
    const auto v = inverse_verdict(mu, mu, 4, 0.2, 4);
    EXPECT_TRUE(v.passed);
    for (const auto& V : v.subspaces) {
        EXPECT_EQ(V.dim(), 1);
        EXPECT_LT(sub_distance(V, Subspace::axes(2, {0})), 1e-9);
    }
}

TEST(InverseVerdict, ArgumentChecks) {
    const auto mu = uniform_cube(1, 8);
    EXPECT_THROW(inverse_verdict(mu, mu, 6, 0.2, 4), std::invalid_argument);
    EXPECT_THROW(inverse_verdict(mu, uniform_cube(1, 7), 2, 0.2, 2), std::invalid_argument);
    EXPECT_THROW(inverse_verdict(mu, mu, 2, 1.5, 2), std::invalid_argument);
}

TEST(IsometryVerdict, RotationsAboutCentre) {
    SimMeasure nu;
    const Vec c = (Vec(2) << 0.5, 0.5).finished();
    for (int q = 0; q < 4; ++q) {
        const Mat R = rotation2(q * std::numbers::pi / 2);
        nu.atoms.push_back({Similitude::from_ratio(1.0, R, c - R * c), 0.25});
    }
    const auto mu = uniform_cube(2, 9);
    const auto v = isometry_verdict(nu, mu, 1, 3, 0.2, 3);
    EXPECT_FALSE(v.pairs.empty());
    EXPECT_NEAR(v.pass_rate, 1.0, 1e-12);
    EXPECT_NEAR(v.growth, 0.0, 1e-9);
    EXPECT_NEAR(v.c_bound, 0.5 * v.nu_entropy, 1e-15);

    SimMeasure bad = nu;
    bad.atoms[0].g = Similitude::scale_map(0.5, 2);
    EXPECT_THROW(isometry_verdict(bad, mu, 1, 3, 0.2, 3), std::invalid_argument);
    EXPECT_THROW(isometry_verdict(nu, mu, 4, 3, 0.2, 3), std::invalid_argument);
}
