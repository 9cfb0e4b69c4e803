#include <fel/exact.hpp>
#include <fel/similitude.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fel;

namespace {

Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

}  // namespace

TEST(Similitude, ApplyMatchesDefinition) {
    const Similitude g = Similitude::from_ratio(0.5, rotation2(std::numbers::pi / 2), v2(1, 0));
    const Vec y = g.apply(v2(2, 0));
    // 0.5 * R(90) (2,0) + (1,0) = (1, 1)
    EXPECT_NEAR(y(0), 1.0, 1e-15);
    EXPECT_NEAR(y(1), 1.0, 1e-15);
    EXPECT_NEAR(g.t, 1.0, 1e-15);
    EXPECT_NEAR(g.ratio(), 0.5, 1e-15);
}

TEST(Similitude, ComposeIsFunctionComposition) {
    const Similitude g = Similitude::from_ratio(0.3, rotation2(0.7), v2(0.2, -1));
    const Similitude h = Similitude::from_ratio(0.6, rotation2(-1.1), v2(3, 0.5));
    const Similitude gh = compose(g, h);
    for (const Vec& x : {v2(0, 0), v2(1, 2), v2(-3, 0.25)}) {
        const Vec a = gh.apply(x), b = g.apply(h.apply(x));
        EXPECT_NEAR((a - b).norm(), 0.0, 1e-13);
    }
    EXPECT_NEAR(gh.ratio(), 0.18, 1e-15);
}

TEST(Similitude, InverseRoundTrips) {
    const Similitude g = Similitude::from_ratio(0.25, rotation2(2.0), v2(0.5, 0.75));
    const Similitude e = compose(g, g.inverse());
    EXPECT_NEAR(sim_distance(e, Similitude::identity(2)), 0.0, 1e-13);
}

TEST(Similitude, MetricTerms) {
    const Similitude g = Similitude::from_ratio(0.5, Mat::Identity(2, 2), v2(0, 0));
    const Similitude h = Similitude::from_ratio(0.25, rotation2(std::numbers::pi), v2(3, 4));
    // |1 - 2| + ||I - (-I)|| + |(3,4)| = 1 + 2 + 5
    EXPECT_NEAR(sim_distance(g, h), 8.0, 1e-13);
    EXPECT_DOUBLE_EQ(sim_distance(g, g), 0.0);
    EXPECT_NEAR(sim_distance(g, h), sim_distance(h, g), 1e-15);
}

TEST(Similitude, OperatorNormIsLargestSingularValue) {
    Mat A(2, 2);
    A << 3, 0, 4, 5;
    // A^T A = [[25, 20], [20, 25]] has eigenvalues 45 and 5.
    EXPECT_NEAR(op_norm(A), std::sqrt(45.0), 1e-12);
}

TEST(Similitude, IsometryAndScaleMap) {
    EXPECT_TRUE(Similitude::translation(v2(1, 2)).is_isometry());
    EXPECT_FALSE(Similitude::scale_map(1.0, 2).is_isometry());
    EXPECT_NEAR(Similitude::scale_map(3.0, 2).apply(v2(1, 1))(0), 8.0, 1e-15);
}

TEST(Similitude, DyadicCellsFloorCoordinates) {
    const Similitude g(0.3, Mat::Identity(1, 1), (Vec(1) << -0.26).finished());
    const GCells c = dyadic_cells_G(g, 2);
    // floor(4 * (0.3, 1, -0.26)) = (1, 4, -2)
    EXPECT_EQ(c.full.coords, (std::vector<std::int64_t>{1, 4, -2}));
    EXPECT_EQ(c.translation_only.coords, (std::vector<std::int64_t>{-2}));
    EXPECT_EQ(full_cell(g, 2), c.full);
    EXPECT_EQ(translation_cell(g, 2), c.translation_only);
}

TEST(Exact, ParsesRationalsAndDecimals) {
    EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
    EXPECT_EQ(parse_rational("0.625"), Rational(5, 8));
    EXPECT_EQ(parse_rational("-1.5e-2"), Rational(-3, 200));
    EXPECT_EQ(parse_rational("7"), Rational(7));
    EXPECT_EQ(to_string(Rational(-4, 6)), "-2/3");
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Exact, CompositionMatchesDoubleAndKeysDistinguish) {
    ExactSimilitude f;
    f.d = 1;
    f.r = Rational(1, 2);
    f.U = {Rational(1)};
    f.a = {Rational(0)};
    ExactSimilitude g = f, h = f;
    g.a = {Rational(1, 2)};
    h.a = {Rational(1)};
    // phi_1 o phi_3 = phi_2 o phi_1 = x/4 + 1/2
    EXPECT_EQ(compose(f, h).key(), compose(g, f).key());
    EXPECT_NE(compose(f, g).key(), compose(g, f).key());
    const Similitude d = compose(f, h).to_double();
    EXPECT_NEAR(d.apply((Vec(1) << 1.0).finished())(0), 0.75, 1e-15);
    EXPECT_EQ(apply(compose(f, h), {Rational(1)})[0], Rational(3, 4));
}
