#include <fel/param_scan.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace fel;

namespace {

ParamFamily translations_1d() {
    return ParamFamily::translation({0.5, 0.5}, {Mat::Identity(1, 1), Mat::Identity(1, 1)}, {0.0, 0.0}, {1.0, 1.0});
}

}  // namespace

TEST(ParamFamilyTest, BoxAndEvaluation) {
    const auto F = ParamFamily::bernoulli();
    EXPECT_EQ(F.param_dim(), 2);
    EXPECT_EQ(F.dim(), 1);
    EXPECT_EQ(F.alphabet(), 2u);
    EXPECT_TRUE(F.contains({0.6, 0.6}));
    EXPECT_FALSE(F.contains({0.6, 0.8}));
    EXPECT_FALSE(F.contains({0.5, 0.6}, 0.01));
    const auto s = F.eval({0.55, 0.65});
    EXPECT_NEAR(s.maps[1].ratio(), 0.65, 1e-15);
    EXPECT_NEAR(s.maps[1].a(0), 1.0, 1e-15);
    EXPECT_THROW(F.eval({0.1, 0.6}), std::domain_error);
}

TEST(ParamFamilyTest, Parse) {
    const auto F = ParamFamily::parse("bernoulli[0.2,0.3]x[0.4,0.5]");
    EXPECT_EQ(F.lo(), (std::vector<double>{0.2, 0.4}));
    EXPECT_EQ(F.hi(), (std::vector<double>{0.3, 0.5}));
    EXPECT_EQ(ParamFamily::parse("fat-sierpinski").param_dim(), 1);
    EXPECT_THROW(ParamFamily::parse("bernoulli[0.2,0.3]"), std::invalid_argument);
    EXPECT_THROW(ParamFamily::parse("unknown"), std::invalid_argument);
}

TEST(ParamFamilyTest, InterpolationEndpoints) {
    const auto F = ParamFamily::interpolation(bernoulli(0.5, 0.5), bernoulli(0.6, 0.7));
    EXPECT_NEAR(F.eval({0.0}).maps[0].ratio(), 0.5, 1e-15);
    EXPECT_NEAR(F.eval({0.5}).maps[1].ratio(), 0.6, 1e-15);
    EXPECT_NEAR(F.eval({1.0}).maps[1].ratio(), 0.7, 1e-15);
    EXPECT_THROW(ParamFamily::interpolation(cantor3(), fat_sierpinski(0.5)), std::invalid_argument);
}

TEST(DeltaIJ, BernoulliByHand) {
    const auto F = ParamFamily::bernoulli();
    // phi_1(0) - phi_2(0) = 0 - 1
    EXPECT_NEAR(delta_ij_t(F, {0}, {1}, {0.5, 0.6})(0), -1.0, 1e-15);
    // phi_1 phi_2 (0) - phi_2 phi_1 (0) = beta - 1
    EXPECT_NEAR(delta_ij_t(F, {0, 1}, {1, 0}, {0.5, 0.6})(0), -0.5, 1e-15);
}

TEST(DeltaIJ, JacobianRanks) {
    const auto F = ParamFamily::bernoulli();
    EXPECT_EQ(jacobian_rank(F, {0}, {1}, {0.6, 0.6}).rank, 0);
    const auto r = jacobian_rank(F, {0, 1}, {1, 0}, {0.6, 0.6});
    EXPECT_EQ(r.rank, 1);
    EXPECT_NEAR(r.jacobian(0, 0), 1.0, 1e-8);
    EXPECT_NEAR(r.jacobian(0, 1), 0.0, 1e-8);

    const auto T = ParamFamily::translation({0.5, 0.5}, {Mat::Identity(2, 2), Mat::Identity(2, 2)},
                                            {0, 0, 0, 0}, {1, 1, 1, 1});
    const auto q = jacobian_rank(T, {0}, {1}, {0.2, 0.3, 0.6, 0.1});
    EXPECT_EQ(q.rank, 2);
    EXPECT_EQ(q.jacobian.rows(), 2);
    EXPECT_EQ(q.jacobian.cols(), 4);
}

TEST(Cover, GridPoints) {
    const auto g = grid_points({0, 1}, {1, 2}, {3, 1});
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0], (std::vector<double>{0.0, 1.5}));
    EXPECT_EQ(g[2], (std::vector<double>{1.0, 1.5}));
}

TEST(Cover, MinImageGapByHand) {
    // Level 2 of {x/3, x/3 + 2/3}: images 0, 2/9, 2/3, 8/9.
    EXPECT_NEAR(min_image_gap(cantor3(), 2), 2.0 / 9.0, 1e-15);
}

TEST(Cover, SeparatedFamilyHasNoHits) {
    const auto F = ParamFamily::parse("bernoulli[0.2,0.3]x[0.2,0.3]");
    const auto c = exceptional_cover(F, 4, 0.1, 0.05);
    EXPECT_EQ(c.cells, 4u);
    EXPECT_EQ(c.hit_count, 0u);
    EXPECT_NEAR(c.threshold, 1e-4, 1e-18);
    EXPECT_GT(c.bound, 0.0);
}

TEST(Cover, DiagonalCellsOfTranslationFamilyHit) {
    // a_1 = a_2 makes the two maps coincide; off the diagonal the gap is >= 1/4.
    const auto c = exceptional_cover(translations_1d(), 1, 0.1, 0.25);
    EXPECT_EQ(c.cells, 16u);
    EXPECT_EQ(c.hit_count, 4u);
    for (const auto& row : c.rows) EXPECT_EQ(row.hit, std::abs(row.center[0] - row.center[1]) < 1e-12);
}

TEST(Cover, BudgetIsEnforced) {
    EXPECT_THROW(exceptional_cover(ParamFamily::bernoulli(), 10, 0.5, 0.001, -1, 1000), BudgetExceeded);
}

TEST(Scan, FatSierpinskiSimilarityDimension) {
    const auto F = ParamFamily::fat_sierpinski();
    ScanDiagnostics diag;
    diag.delta_n = 3;
    const auto rows = scan(F, {{0.4}, {0.5}}, diag);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(scan_columns(diag), (std::vector<std::string>{"sdim", "delta_n"}));
    EXPECT_NEAR(rows[0].values[0].second, std::log(3.0) / std::log(2.5), 1e-12);
    EXPECT_NEAR(rows[1].values[0].second, std::log(3.0) / std::log(2.0), 1e-12);
    EXPECT_TRUE(rows[0].error.empty());
}

TEST(Scan, OutOfBoxPointRecordsError) {
    const auto rows = scan(ParamFamily::fat_sierpinski(), {{0.2}, {0.5}}, ScanDiagnostics{});
    EXPECT_FALSE(rows[0].error.empty());
    EXPECT_TRUE(rows[1].error.empty());
}
