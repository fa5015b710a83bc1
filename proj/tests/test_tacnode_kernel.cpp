#include <gtest/gtest.h>

#include "tacnode/limit_kernels.hpp"
#include "tacnode/tacnode_kernel.hpp"

using namespace tacnode;

namespace {

constexpr double tol = 1e-10;

TacnodeParams params(double e) {
    TacnodeParams p;
    p.eps_tac = e;
    p.tol = tol;
    return p;
}

cplx Kt(int x1, double mu1, int x2, double mu2, double e) { return kernel_tacnode({x1, mu1}, {x2, mu2}, params(e)).value; }

}  // namespace

TEST(TacnodeKernel, MatchesIndependentQuadrature) {
    EXPECT_NEAR(Kt(0, 0.2, 0, 0.2, 0.5).real(), 5.6287814131077663e-01, 1e-9);
    EXPECT_NEAR(Kt(-1, 0.3, 0, 0.7, 0.5).real(), 9.1765403797835793e-02, 1e-9);
    EXPECT_NEAR(Kt(1, 0.3, 0, 0.7, 1.0).real(), 1.2127807632751764e-01, 1e-9);
    EXPECT_NEAR(Kt(0, -0.4, 2, 0.1, 0.25).real(), -4.5044844515097288e-01, 1e-9);
    EXPECT_NEAR(Kt(0, 0.2, 0, 0.5, 2.0).real(), -2.2294013703503257e-01, 1e-9);
}

TEST(TacnodeKernel, ReflectionSymmetry) {
    EXPECT_NEAR(std::abs(Kt(-2, 0.3, -1, 0.7, 0.5) - Kt(1, 0.3, 0, 0.7, 0.5)), 0.0, 10 * tol);
}

TEST(TacnodeKernel, ParticleHoleSymmetry) {
    EXPECT_NEAR(std::abs(Kt(0, -0.4, 0, -0.4, 0.5) + Kt(0, 0.4, 0, 0.4, 0.5) - 1.0), 0.0, 10 * tol);
    EXPECT_NEAR(std::abs(-Kt(1, -0.4, 0, 0.2, 0.5) + Kt(1, 0.4, 0, -0.2, 0.5)), 0.0, 10 * tol);
}

TEST(TacnodeKernel, GeometryDoesNotChangeTheValue) {
    TacnodeParams p = params(0.5);
    const cplx base = kernel_tacnode({1, 0.3}, {0, 0.7}, p).value;
    p.anchor = 1.5;
    EXPECT_NEAR(std::abs(kernel_tacnode({1, 0.3}, {0, 0.7}, p).value - base), 0.0, 1e-9);
    p.anchor = 0.0;
    p.angle = 0.35 * pi;
    EXPECT_NEAR(std::abs(kernel_tacnode({1, 0.3}, {0, 0.7}, p).value - base), 0.0, 1e-9);
}

TEST(TacnodeKernel, OnePointFunctionIsAProbability) {
    for (double e : {0.25, 0.5, 1.0, 2.0}) {
        for (double mu : {-1.0, 0.0, 1.0}) {
            cplx v = Kt(0, mu, 0, mu, e);
            EXPECT_NEAR(v.imag(), 0.0, 1e-9);
            EXPECT_GE(v.real(), -1e-9);
            EXPECT_LE(v.real(), 1.0 + 1e-9);
        }
    }
}

TEST(TacnodeKernel, RejectsNonPositiveParameter) {
    EXPECT_THROW(Kt(0, 0, 0, 0, 0.0), DomainError);
    TacnodeParams p = params(0.5);
    p.anchor = 0.9;
    EXPECT_THROW(kernel_tacnode({0, 0}, {0, 0}, p), ContourConflict);
}

TEST(ChiTermBessel, ValuesAtZero) {
    EXPECT_EQ(chi_term_bessel(0, 0.0), 1.0);
    EXPECT_EQ(chi_term_bessel(3, 0.0), 0.0);
}

TEST(ChiTermBessel, MatchesQuadrature) {
    EXPECT_NEAR(chi_term_bessel(1, 0.5), chi_term_quadrature(1, 0.5).value.real(), 1e-10);
    // I_1(1): the indicator term of the kernel at mu2 - mu1 = 0.5, x2 - x1 = 1, eps = 1
    EXPECT_NEAR(chi_term_bessel(-1, 1.0 * 0.5), 0.56515910399248503, 1e-15);
}

TEST(ChiTermBessel, MatchesReferenceValues) {
    EXPECT_NEAR(chi_term_bessel(0, 0.1), 1.0100250277951459, 1e-15);
    EXPECT_NEAR(chi_term_bessel(3, 1.0), 2.1273995923985264e-01, 1e-15);
    EXPECT_NEAR(chi_term_bessel(-2, 5.0) / 2.2815189677260037e+03, 1.0, 1e-14);
    EXPECT_NEAR(chi_term_bessel(5, 0.1) / 8.3472321469918918e-08, 1.0, 1e-14);
}

TEST(EndpointKernel, OnePointIntensityIsReal) {
    for (double mu : {-1.0, 0.0, 1.0}) {
        KernelValue v = endpoint_kernel({0, mu}, {0, mu}, params(0.5));
        EXPECT_NEAR(v.value.imag(), 0.0, 10 * tol);
        EXPECT_GE(v.value.real(), -10 * tol);
    }
}

TEST(EndpointKernel, ReflectionMapsXToMinusOneMinusX) {
    for (int x : {0, 1, 2}) {
        cplx a = endpoint_kernel({x, 0.3}, {x, 0.3}, params(0.5)).value;
        cplx b = endpoint_kernel({-1 - x, 0.3}, {-1 - x, 0.3}, params(0.5)).value;
        EXPECT_NEAR(std::abs(a - b), 0.0, 10 * tol) << x;
    }
}

TEST(EndpointKernel, SmallParameterApproachesGueMinor) {
    const GUEPoint a{1, 0.3}, b{2, 0.1};
    const double limit = kernel_gue_minor(a, b).value.real();
    double prev = INFINITY;
    for (double e : {0.5, 0.25, 0.125}) {
        const double dev = std::abs(scaled_tacnode_for_gue_minor(e, a, b, params(e)).value.real() - limit);
        EXPECT_LT(dev, prev) << e;
        prev = dev;
    }
}
