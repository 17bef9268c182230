#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "willmore/anisotropy.hpp"
#include "willmore/error.hpp"

using namespace willmore;

namespace {

struct Named {
    std::string name;
    SurfaceEnergy energy;
};

std::vector<Named> all_energies() {
    return {{"iso", SurfaceEnergy::isotropic()},
            {"G_diag21", SurfaceEnergy::quadratic_form(2, 0, 1)},
            {"G_2111", SurfaceEnergy::quadratic_form(2, 1, 1)},
            {"G_10_8_8_10", SurfaceEnergy::quadratic_form(10, 8, 10)},
            {"abs_0.1", SurfaceEnergy::regularized_abs(0.1)},
            {"abs_1", SurfaceEnergy::regularized_abs(1.0)},
            {"abs_0.001", SurfaceEnergy::regularized_abs(0.001)}};
}

std::vector<GradientVec> random_slopes(std::uint64_t seed, int count, double radius) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> r(0.0, radius);
    std::uniform_real_distribution<double> a(0.0, 2.0 * std::numbers::pi);
    std::vector<GradientVec> out;
    for (int k = 0; k < count; ++k) {
        const double rad = r(rng);
        const double ang = a(rng);
        out.push_back({rad * std::cos(ang), rad * std::sin(ang)});
    }
    return out;
}

GradientVec fd_grad(const SurfaceEnergy& se, GradientVec p, double h) {
    return {oracle::central([&](double s) { return se.gamma({s, p.p2}); }, p.p1, h),
            oracle::central([&](double s) { return se.gamma({p.p1, s}); }, p.p2, h)};
}

Hessian2 fd_hessian(const SurfaceEnergy& se, GradientVec p, double h) {
    const GradientVec xp = se.grad_p({p.p1 + h, p.p2});
    const GradientVec xm = se.grad_p({p.p1 - h, p.p2});
    const GradientVec yp = se.grad_p({p.p1, p.p2 + h});
    const GradientVec ym = se.grad_p({p.p1, p.p2 - h});
    return {(xp.p1 - xm.p1) / (2 * h), (yp.p1 - ym.p1) / (2 * h), (xp.p2 - xm.p2) / (2 * h),
            (yp.p2 - ym.p2) / (2 * h)};
}

}  // namespace

TEST(SurfaceEnergy, ConstructionContracts) {
    EXPECT_THROW(SurfaceEnergy::quadratic_form(1, 2, 1), ContractError);
    EXPECT_THROW(SurfaceEnergy::quadratic_form(-1, 0, 1), ContractError);
    EXPECT_THROW(SurfaceEnergy::regularized_abs(0.0), ContractError);
    EXPECT_THROW(SurfaceEnergy::regularized_abs(-0.1), ContractError);
    EXPECT_NO_THROW(SurfaceEnergy::quadratic_form(10, 8, 10));
}

TEST(SurfaceEnergy, GammaExamples) {
    EXPECT_DOUBLE_EQ(gamma(SurfaceEnergy::isotropic(), {0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(gamma(SurfaceEnergy::quadratic_form(2, 0, 1), {1, 1}), 2.0);
    // 2 sqrt(0.1) + sqrt(1.1) = 0.6324555 + 1.0488088
    EXPECT_NEAR(gamma(SurfaceEnergy::regularized_abs(0.1), {0, 0}), 1.681264, 1e-6);
    EXPECT_NEAR(gamma(SurfaceEnergy::regularized_abs(0.1), {0, 0}), 2 * std::sqrt(0.1) + std::sqrt(1.1), 1e-15);
}

TEST(SurfaceEnergy, GradientExamples) {
    for (const auto& [name, se] : all_energies()) {
        const GradientVec g = grad_p(se, {0, 0});
        EXPECT_NEAR(g.p1, 0.0, 1e-15) << name;
        EXPECT_NEAR(g.p2, 0.0, 1e-15) << name;
    }
    const GradientVec g = grad_p(SurfaceEnergy::isotropic(), {1, 0});
    EXPECT_NEAR(g.p1, 0.707107, 1e-6);
    EXPECT_DOUBLE_EQ(g.p2, 0.0);
    const SurfaceEnergy abs = SurfaceEnergy::regularized_abs(0.1);
    const GradientVec a = grad_p(abs, {0.3, -0.7});
    const GradientVec fd = fd_grad(abs, {0.3, -0.7}, 1e-6);
    EXPECT_NEAR(a.p1, fd.p1, 1e-6);
    EXPECT_NEAR(a.p2, fd.p2, 1e-6);
}

TEST(SurfaceEnergy, HessianExamples) {
    const Hessian2 iso = hessian(SurfaceEnergy::isotropic(), {0, 0});
    EXPECT_DOUBLE_EQ(iso.e11, 1.0);
    EXPECT_DOUBLE_EQ(iso.e12, 0.0);
    EXPECT_DOUBLE_EQ(iso.e21, 0.0);
    EXPECT_DOUBLE_EQ(iso.e22, 1.0);
    const Hessian2 g = hessian(SurfaceEnergy::quadratic_form(2, 0, 1), {0, 0});
    EXPECT_DOUBLE_EQ(g.e11, 2.0);
    EXPECT_DOUBLE_EQ(g.e12, 0.0);
    EXPECT_DOUBLE_EQ(g.e22, 1.0);
    const SurfaceEnergy abs = SurfaceEnergy::regularized_abs(0.1);
    const Hessian2 a = hessian(abs, {0.5, 0.2});
    const Hessian2 fd = fd_hessian(abs, {0.5, 0.2}, 1e-5);
    EXPECT_NEAR(a.e11, fd.e11, 1e-5);
    EXPECT_NEAR(a.e12, fd.e12, 1e-5);
    EXPECT_NEAR(a.e21, fd.e21, 1e-5);
    EXPECT_NEAR(a.e22, fd.e22, 1e-5);
}

TEST(SurfaceEnergy, IsotropicHessianClosedForm) {
    // (1/Q)(I - (p/Q) (x) (p/Q))
    const GradientVec p{0.8, -1.3};
    const double q = std::sqrt(1 + p.p1 * p.p1 + p.p2 * p.p2);
    const Hessian2 e = hessian(SurfaceEnergy::isotropic(), p);
    EXPECT_NEAR(e.e11, (1 - p.p1 * p.p1 / (q * q)) / q, 1e-15);
    EXPECT_NEAR(e.e12, -p.p1 * p.p2 / (q * q * q), 1e-15);
    EXPECT_NEAR(e.e22, (1 - p.p2 * p.p2 / (q * q)) / q, 1e-15);
}

TEST(SurfaceEnergy, DerivativeSuiteAtRandomSlopes) {
    for (const auto& [name, se] : all_energies()) {
        for (const GradientVec& p : random_slopes(42, 100, 10.0)) {
            const GradientVec g = se.grad_p(p);
            const GradientVec gfd = fd_grad(se, p, 1e-6);
            EXPECT_NEAR(g.p1, gfd.p1, 1e-6) << name;
            EXPECT_NEAR(g.p2, gfd.p2, 1e-6) << name;

            const Hessian2 e = se.hessian(p);
            const Hessian2 efd = fd_hessian(se, p, 1e-5);
            EXPECT_NEAR(e.e11, efd.e11, 1e-5) << name;
            EXPECT_NEAR(e.e12, efd.e12, 1e-5) << name;
            EXPECT_NEAR(e.e21, efd.e21, 1e-5) << name;
            EXPECT_NEAR(e.e22, efd.e22, 1e-5) << name;

            EXPECT_LE(std::abs(e.e12 - e.e21), 1e-12) << name;
            EXPECT_GE(e.min_eigenvalue(), -1e-10) << name;
        }
    }
}

TEST(SurfaceEnergy, OneHomogeneity) {
    for (const auto& [name, se] : all_energies()) {
        for (const GradientVec& p : random_slopes(5, 50, 10.0)) {
            const double base = se.gamma(p);
            for (double lambda : {0.5, 2.0, -3.0}) {
                const double scaled = se.gamma_full({lambda * p.p1, lambda * p.p2, -lambda});
                EXPECT_NEAR(scaled, std::abs(lambda) * base, 1e-12 * std::abs(lambda) * base) << name;
            }
        }
    }
    // explicit lambda-scaled closed forms
    const GradientVec p{0.4, 1.1};
    const double l = -3.0;
    EXPECT_NEAR(SurfaceEnergy::isotropic().gamma_full({l * p.p1, l * p.p2, -l}),
                std::sqrt(l * l * (1 + p.p1 * p.p1 + p.p2 * p.p2)), 1e-14);
    const double quad = 1 + 2 * p.p1 * p.p1 + 2 * p.p1 * p.p2 + p.p2 * p.p2;
    EXPECT_NEAR(SurfaceEnergy::quadratic_form(2, 1, 1).gamma_full({l * p.p1, l * p.p2, -l}), std::sqrt(l * l * quad),
                1e-14);
}

TEST(SurfaceEnergy, MinEigenvalue) {
    const Hessian2 h{2, 1, 1, 2};
    EXPECT_NEAR(h.min_eigenvalue(), 1.0, 1e-15);
    const Hessian2 d{3, 0, 0, -1};
    EXPECT_NEAR(d.min_eigenvalue(), -1.0, 1e-15);
}

TEST(Wulff, IsotropicIsUnitCircle) {
    const auto pts = wulff_boundary(SurfaceEnergy::isotropic(), 360);
    ASSERT_EQ(pts.size(), 360u);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        EXPECT_NEAR(std::hypot(pts[k].x, pts[k].y), 1.0, 1e-9);
        EXPECT_NEAR(pts[k].theta, 2 * std::numbers::pi * static_cast<double>(k) / 360.0, 1e-15);
    }
}

TEST(Wulff, EightTangentLinesGiveRegularOctagon) {
    // Each tangent line of a unit circle meets the intersection polygon along
    // the edge that contains its tangency point.
    const auto pts = wulff_boundary(SurfaceEnergy::isotropic(), 8);
    ASSERT_EQ(pts.size(), 8u);
    for (const auto& p : pts) {
        EXPECT_NEAR(p.x, std::cos(p.theta), 1e-12);
        EXPECT_NEAR(p.y, std::sin(p.theta), 1e-12);
    }
    // Vertices of the octagon lie at radius 1/cos(pi/8): check that the edge
    // of line 0 spans to those vertices by probing the half-planes directly.
    const double vr = 1.0 / std::cos(std::numbers::pi / 8);
    for (int k = 0; k < 8; ++k) {
        const double a = std::numbers::pi / 8 + k * std::numbers::pi / 4;
        for (int m = 0; m < 8; ++m) {
            const double b = m * std::numbers::pi / 4;
            EXPECT_LE(vr * std::cos(a) * std::cos(b) + vr * std::sin(a) * std::sin(b), 1.0 + 1e-12);
        }
    }
}

TEST(Wulff, QuadraticFormPointsSatisfyAllHalfPlanes) {
    for (const auto& se : {SurfaceEnergy::quadratic_form(2, 0, 1), SurfaceEnergy::quadratic_form(10, 8, 10),
                           SurfaceEnergy::regularized_abs(0.1)}) {
        const int n = 120;
        const auto pts = wulff_boundary(se, n);
        ASSERT_EQ(pts.size(), static_cast<std::size_t>(n));
        for (const auto& pt : pts) {
            for (int k = 0; k < n; ++k) {
                const double th = 2 * std::numbers::pi * k / n;
                const double support = se.gamma_full({std::cos(th), std::sin(th), 0.0});
                EXPECT_LE(pt.x * std::cos(th) + pt.y * std::sin(th), support + 1e-9);
            }
        }
        // Each point touches its own line when that line is active.
        int touching = 0;
        for (const auto& pt : pts) {
            const double support = se.gamma_full({std::cos(pt.theta), std::sin(pt.theta), 0.0});
            if (std::abs(pt.x * std::cos(pt.theta) + pt.y * std::sin(pt.theta) - support) < 1e-9) ++touching;
        }
        EXPECT_EQ(touching, n);
    }
}

TEST(Wulff, DiagonalFormIsEllipse) {
    // sqrt(q^T G q) is the support function of the ellipse x^T G^-1 x = 1;
    // edge midpoints of the circumscribed polygon approach it at O(n^-2).
    double worst_coarse = 0.0;
    double worst_fine = 0.0;
    for (const auto& p : wulff_boundary(SurfaceEnergy::quadratic_form(2, 0, 1), 180)) {
        worst_coarse = std::max(worst_coarse, std::abs(p.x * p.x / 2.0 + p.y * p.y - 1.0));
    }
    for (const auto& p : wulff_boundary(SurfaceEnergy::quadratic_form(2, 0, 1), 360)) {
        worst_fine = std::max(worst_fine, std::abs(p.x * p.x / 2.0 + p.y * p.y - 1.0));
    }
    EXPECT_LT(worst_fine, 1e-3);
    EXPECT_GT(oracle::order(worst_coarse, worst_fine), 1.8);
}

TEST(Wulff, RejectsTooFewSamples) {
    EXPECT_THROW(wulff_boundary(SurfaceEnergy::isotropic(), 7), ContractError);
}
