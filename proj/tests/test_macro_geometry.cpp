#include <gtest/gtest.h>

#include "tacnode/macro_geometry.hpp"

using namespace tacnode;

TEST(FDerivatives, CuspFactorVanishesAtPlusMinusOne) {
    const MacroPoint p{0.0, 3.0, 1.0, 0.5};
    EXPECT_NEAR(std::abs(F_derivatives(1.0, p).dF), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(F_derivatives(-1.0, p).dF), 0.0, 1e-15);
}

TEST(FDerivatives, FiniteDifferencesAreSecondOrder) {
    const MacroPoint p{0.4, 2.5, 1.0, 0.5};
    const cplx z{0.7, 0.3};
    auto err = [&](double h) {
        cplx fd = (F_derivatives(z + h, p).F - F_derivatives(z - h, p).F) / (2 * h);
        return std::abs(fd - F_derivatives(z, p).dF);
    };
    const double e3 = err(1e-3), e4 = err(1e-4);
    EXPECT_LT(e3, 1e-5);
    EXPECT_NEAR(e3 / e4, 100.0, 5.0);
    cplx fd2 = (F_derivatives(z + 1e-4, p).dF - F_derivatives(z - 1e-4, p).dF) / 2e-4;
    EXPECT_NEAR(std::abs(fd2 - F_derivatives(z, p).d2F), 0.0, 1e-6);
}

TEST(FDerivatives, SingularPoints) {
    EXPECT_THROW(F_derivatives(0.5, MacroPoint{0, 1, 1, 0.5}), Singular);
    EXPECT_THROW(F_derivatives(0.0, MacroPoint{0, 1, 1, 0.5}), Singular);
}

TEST(QuarticRoots, RecoversKnownRoots) {
    // (z - 1)(z + 2)(z^2 + 1) = z^4 + z^3 - z^2 + z - 2
    auto r = quartic_roots({-2, 1, -1, 1, 1});
    ASSERT_EQ(r.size(), 4u);
    for (cplx z : r) EXPECT_LT(std::abs(z * z * z * z + z * z * z - z * z + z - 2.0), 1e-12);
}

TEST(Saddle, CenterLineAtHalfDensity) {
    SaddleResult r = saddle({0.0, 5.0, 1.0, 0.5});
    EXPECT_EQ(r.region, Region::D1);
    EXPECT_NEAR(r.density, 0.5, 1e-12);
}

TEST(Saddle, DensityIncreasesThroughTheCenter) {
    const double lo = saddle({0.0, 5.0 - 1e-3, 1.0, 0.5}).density;
    const double hi = saddle({0.0, 5.0 + 1e-3, 1.0, 0.5}).density;
    EXPECT_LT(lo, 0.5);
    EXPECT_GT(hi, 0.5);
}

TEST(Saddle, FarAboveIsPacked) {
    SaddleResult r = saddle({0.0, 1e6, 1.0, 0.5});
    EXPECT_EQ(r.region, Region::D2);
    EXPECT_EQ(r.density, 1.0);
}

TEST(Saddle, OutsideTheConeIsEmpty) {
    SaddleResult r = saddle({5.0, 0.5, 1.0, 0.5});
    EXPECT_EQ(r.region, Region::outside);
    EXPECT_EQ(r.density, 0.0);
}

TEST(Saddle, ClosedFormOnTheCenterLine) {
    const BoundaryTable table(0.5, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double mu = 1.25 + 0.75 * i;  // strictly between the cusps 1 and 9
        const auto closed = density_xi0_closed(0.5, 1.0, mu);
        ASSERT_TRUE(closed.has_value());
        EXPECT_NEAR(saddle({0.0, mu, 1.0, 0.5}, table).density, *closed, 1e-9) << mu;
    }
}

TEST(Saddle, RejectsBadPoints) {
    EXPECT_THROW(saddle({0.0, -1.0, 1.0, 0.5}), DomainError);
    EXPECT_THROW(saddle({0.0, 1.0, 1.0, 1.5}), DomainError);
}

TEST(CuspPoints, FormulaValues) {
    auto [a, b] = cusp_points(1.0);
    EXPECT_DOUBLE_EQ(a, 0.0);
    EXPECT_DOUBLE_EQ(b, 4.0);
    auto [c, d] = cusp_points(0.5);
    EXPECT_DOUBLE_EQ(c, 0.5);
    EXPECT_DOUBLE_EQ(d, 4.5);
    for (double e : {0.1, 0.3, 0.7}) {
        auto [lo, hi] = cusp_points(e);
        EXPECT_NEAR(hi - lo, 4.0, 1e-12);
    }
}

TEST(BoundaryCurve, CuspsAreTheLimitsAtPlusMinusOne) {
    const double eps = 0.5, tau = 1.0;
    const auto [lo, hi] = cusp_points(eps, tau);
    auto near_plus = boundary_point(1.0 + 1e-6, eps, tau);
    auto near_minus = boundary_point(-1.0 + 1e-6, eps, tau);
    ASSERT_TRUE(near_plus && near_minus);
    EXPECT_NEAR(near_plus->xi, 0.0, 1e-5);
    EXPECT_NEAR(near_plus->mu, lo, 1e-5);
    EXPECT_NEAR(near_minus->xi, 0.0, 1e-5);
    EXPECT_NEAR(near_minus->mu, hi, 1e-5);
    EXPECT_EQ(boundary_point(1.0, eps, tau)->mu, lo);
    EXPECT_EQ(boundary_point(-1.0, eps, tau)->mu, hi);
}

TEST(BoundaryCurve, TouchesTheAxisAtThePoles) {
    for (double z : {0.5 - 1e-7, 0.5 + 1e-7, 2.0 - 1e-7, 2.0 + 1e-7}) {
        auto b = boundary_point(z, 0.5, 1.0);
        ASSERT_TRUE(b.has_value()) << z;
        EXPECT_NEAR(b->mu, 0.0, 1e-5) << z;
    }
}

TEST(BoundaryCurve, MatchesIndependentSolve) {
    auto a = boundary_point(1.5, 0.5, 1.0);
    auto b = boundary_point(-2.0, 0.5, 1.0);
    auto c = boundary_point(0.25, 0.5, 1.0);
    ASSERT_TRUE(a && b && c);
    EXPECT_NEAR(a->xi, 4.0849673202614378e-01, 1e-12);
    EXPECT_NEAR(a->mu, 3.3986928104575165e-01, 1e-12);
    EXPECT_NEAR(b->xi, 3.2926829268292684e-01, 1e-12);
    EXPECT_NEAR(b->mu, 1.2195121951219512e+01, 1e-11);
    EXPECT_NEAR(c->xi, -7.9599056603773581e+00, 1e-11);
    EXPECT_NEAR(c->mu, 3.9292452830188678e+00, 1e-11);
}

TEST(BoundaryCurve, PointsAreDoubleSaddles) {
    std::vector<double> zs;
    for (int k = 1; k < 40; ++k) zs.push_back(-5.0 + 0.23 * k);
    for (const auto& b : boundary_curve(0.5, 1.0, zs)) {
        const MacroPoint p{b.xi, b.mu, 1.0, 0.5};
        const auto d = F_derivatives(b.z_real, p);
        EXPECT_LE(std::abs(d.dF), 1e-9 * macro_scale(p)) << b.z_real;
        EXPECT_LE(std::abs(d.d2F), 1e-9 * macro_scale(p)) << b.z_real;
    }
}

TEST(BoundaryTable, CenterLineCrossesBothCusps) {
    const BoundaryTable t(0.5, 1.0);
    auto c = t.crossings(0.0);
    ASSERT_FALSE(c.empty());
    EXPECT_NEAR(c.front().mu, 1.0, 1e-9);
    EXPECT_NEAR(c.back().mu, 9.0, 1e-9);
}
