#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "willmore/energy.hpp"
#include "willmore/error.hpp"
#include "willmore/spatial.hpp"

using namespace willmore;
using A = DoubledField::Axis;
using D = DoubledField::Difference;

namespace {

DoubledField random_doubled(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1, 1);
    DoubledField f(g);
    for (int l = 0; l < f.size(); ++l) {
        for (int k = 0; k < f.size(); ++k) f(k, l) = dist(rng);
    }
    return f;
}

// Lemma sides from the raw definitions: explicit loops over the doubled
// lattice with differences 2 (U_{k+1} - U_k) / h.
struct Sides {
    double lhs;
    double rhs;
};

Sides green_by_loops(const DoubledField& U, const DoubledField& V) {
    const int m = U.size() - 1;  // 2N
    const double h = U.h();
    const double w = h * h / 4;
    auto fk = [&](const DoubledField& F, int k, int l) { return 2 * (F(k + 1, l) - F(k, l)) / h; };
    auto bk = [&](const DoubledField& F, int k, int l) { return 2 * (F(k, l) - F(k - 1, l)) / h; };
    auto fl = [&](const DoubledField& F, int k, int l) { return 2 * (F(k, l + 1) - F(k, l)) / h; };
    auto bl = [&](const DoubledField& F, int k, int l) { return 2 * (F(k, l) - F(k, l - 1)) / h; };
    double lhs = 0;
    for (int l = 1; l < m; ++l) {
        for (int k = 1; k < m; ++k) {
            lhs += w * 0.5 * (fk(U, k, l) + bk(U, k, l) + fl(U, k, l) + bl(U, k, l)) * V(k, l);
        }
    }
    double c = 0;
    for (int l = 1; l <= m - 1; ++l) {
        for (int k = 0; k <= m - 1; ++k) c += w * U(k, l) * fk(V, k, l);
        for (int k = 1; k <= m; ++k) c += w * U(k, l) * bk(V, k, l);
    }
    for (int k = 1; k <= m - 1; ++k) {
        for (int l = 0; l <= m - 1; ++l) c += w * U(k, l) * fl(V, k, l);
        for (int l = 1; l <= m; ++l) c += w * U(k, l) * bl(V, k, l);
    }
    double b = 0;
    for (int s = 1; s < m; ++s) {
        b += (U(m - 1, s) + U(m, s)) * V(m, s) - (U(0, s) + U(1, s)) * V(0, s);
        b += (U(s, m - 1) + U(s, m)) * V(s, m) - (U(s, 0) + U(s, 1)) * V(s, 0);
    }
    return {lhs, -0.5 * c + 0.25 * h * b};
}

}  // namespace

TEST(DoubledField, FromNodal) {
    const Grid g = Grid::centered_square(1.0, 3);
    std::mt19937_64 rng(1);
    const GridFunction u = oracle::random_field(g, rng);
    const DoubledField d = DoubledField::from_nodal(u);
    ASSERT_EQ(d.size(), 7);
    for (int j = 0; j <= 3; ++j) {
        for (int i = 0; i <= 3; ++i) EXPECT_EQ(d(2 * i, 2 * j), u(i, j));
    }
    EXPECT_DOUBLE_EQ(d(3, 2), 0.5 * (u(1, 1) + u(2, 1)));
    EXPECT_DOUBLE_EQ(d(2, 5), 0.5 * (u(1, 2) + u(1, 3)));
    EXPECT_DOUBLE_EQ(d(1, 3), 0.5 * (u(0, 1) + u(1, 2)));
    EXPECT_THROW(DoubledField(Grid(0, 0, 1, 1, 3, 4)), ContractError);
    EXPECT_THROW(DoubledField(Grid(0, 0, 1, 2, 3, 3)), ContractError);
}

TEST(DoubledField, Differences) {
    const Grid g = Grid::centered_square(1.0, 2);  // h = 1, half step 0.5
    DoubledField f(g);
    for (int l = 0; l < 5; ++l) {
        for (int k = 0; k < 5; ++k) f(k, l) = k * k + 3 * l;
    }
    const DoubledField fk = f.difference(A::K, D::Forward);
    const DoubledField bk = f.difference(A::K, D::Backward);
    const DoubledField ck = f.difference(A::K, D::Central);
    const DoubledField cl = f.difference(A::L, D::Central);
    EXPECT_DOUBLE_EQ(fk(1, 2), 2 * (4 - 1));
    EXPECT_DOUBLE_EQ(bk(1, 2), 2 * (1 - 0));
    EXPECT_DOUBLE_EQ(ck(1, 2), 4.0);
    EXPECT_DOUBLE_EQ(cl(3, 3), 6.0);
    EXPECT_DOUBLE_EQ(fk(4, 0), bk(4, 0));  // one-sided at the lattice edge
    EXPECT_DOUBLE_EQ(bk(0, 0), fk(0, 0));
}

TEST(Bracket, Examples) {
    const Grid g = Grid::centered_square(1.0, 2);
    const double h = g.h1();
    DoubledField one(g, 1.0);
    EXPECT_DOUBLE_EQ(bracket(one, one, 2, 3, 2, 3), h * h / 4);
    DoubledField a(g);
    DoubledField b(g);
    a(0, 0) = 5;
    b(1, 1) = 7;
    EXPECT_EQ(bracket(a, b, 0, 0, 4, 4), 0.0);
    EXPECT_THROW(bracket(one, one, 3, 0, 2, 4), ContractError);
    EXPECT_THROW(bracket(one, one, 0, 0, 5, 4), ContractError);
    EXPECT_THROW(bracket(one, DoubledField(Grid::centered_square(1.0, 3)), 0, 0, 1, 1), ContractError);

    std::mt19937_64 rng(4);
    const Grid g5 = Grid::centered_square(2.0, 5);
    const DoubledField f = random_doubled(g5, rng);
    const DoubledField q = random_doubled(g5, rng);
    double direct = 0.0;
    for (int l = 2; l <= 7; ++l) {
        for (int k = 1; k <= 9; ++k) direct += f(k, l) * q(k, l);
    }
    EXPECT_NEAR(bracket(f, q, 1, 2, 9, 7), g5.h1() * g5.h1() / 4 * direct, 1e-14);
}

TEST(Products, Examples) {
    const Grid g = Grid::centered_square(1.0, 2);
    const double h = g.h1();
    DoubledField one(g, 1.0);
    EXPECT_DOUBLE_EQ(product_h(one, one), h * h / 4 * 9);
    DoubledField c(g, 3.0);
    std::mt19937_64 rng(6);
    const DoubledField f = random_doubled(g, rng);
    EXPECT_EQ(product_c(f, c, A::K), 0.0);
    EXPECT_EQ(product_c(f, c, A::L), 0.0);
    EXPECT_EQ(product_c(f, f, c), 0.0);

    const Grid g4 = Grid::centered_square(1.0, 4);
    const DoubledField F = random_doubled(g4, rng);
    const DoubledField G = random_doubled(g4, rng);
    const double hh = g4.h1();
    const double w = hh * hh / 4;
    double pk = 0.0;
    double pl = 0.0;
    for (int l = 1; l <= 7; ++l) {
        for (int k = 0; k <= 7; ++k) pk += w * F(k, l) * 2 * (G(k + 1, l) - G(k, l)) / hh;
        for (int k = 1; k <= 8; ++k) pk += w * F(k, l) * 2 * (G(k, l) - G(k - 1, l)) / hh;
    }
    for (int k = 1; k <= 7; ++k) {
        for (int l = 0; l <= 7; ++l) pl += w * F(k, l) * 2 * (G(k, l + 1) - G(k, l)) / hh;
        for (int l = 1; l <= 8; ++l) pl += w * F(k, l) * 2 * (G(k, l) - G(k, l - 1)) / hh;
    }
    EXPECT_NEAR(product_c(F, G, A::K), pk, 1e-12);
    EXPECT_NEAR(product_c(F, G, A::L), pl, 1e-12);
    double ph = 0.0;
    for (int l = 1; l <= 7; ++l) {
        for (int k = 1; k <= 7; ++k) ph += w * F(k, l) * G(k, l);
    }
    EXPECT_NEAR(product_h(F, G), ph, 1e-14);
}

TEST(Green, TrivialFields) {
    const Grid g = Grid::centered_square(1.0, 4);
    std::mt19937_64 rng(2);
    const GridFunction r = oracle::random_field(g, rng);
    EXPECT_EQ(green_residual(GridFunction(g), r), 0.0);
    EXPECT_EQ(green_residual(r, GridFunction(g)), 0.0);
}

TEST(Green, SidesMatchIndependentLoops) {
    std::mt19937_64 rng(13);
    for (int n = 3; n <= 6; ++n) {
        const Grid g = Grid::centered_square(1.3, n);
        const GridFunction u = oracle::random_field(g, rng);
        const GridFunction v = oracle::random_field(g, rng);
        const GreenSides s = green_sides(u, v);
        const Sides ref = green_by_loops(DoubledField::from_nodal(u), DoubledField::from_nodal(v));
        EXPECT_NEAR(s.lhs, ref.lhs, 1e-12);
        EXPECT_NEAR(s.rhs, ref.rhs, 1e-12);
        EXPECT_NEAR(ref.lhs, ref.rhs, 1e-12);  // the identity itself, by loops
    }
}

TEST(Green, IdentityHoldsOnRandomPairs) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + trial % 6;
        const Grid g = Grid::centered_square(0.5 + 0.1 * (trial % 7), n);
        const GridFunction u = oracle::random_field(g, rng);
        GridFunction v = oracle::random_field(g, rng);
        EXPECT_LE(green_residual(u, v), 1e-12);
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                if (g.is_boundary(i, j)) v(i, j) = 0.0;
            }
        }
        EXPECT_LE(green_residual(u, v), 1e-12);
        const GridFunction p = oracle::random_field(g, rng, 0.5, 2.0);
        EXPECT_LE(zero_green_residual(u, v, p), 1e-12);
    }
}

TEST(Green, PrintedBoundaryFactorDoesNotBalance) {
    // Without the 1/2 on the c-product and with h/2 boundary weights the two
    // sides differ for generic fields.
    std::mt19937_64 rng(5);
    const Grid g = Grid::centered_square(1.0, 4);
    const GridFunction u = oracle::random_field(g, rng);
    const GridFunction v = oracle::random_field(g, rng);
    const GreenSides s = green_sides(u, v);
    const DoubledField U = DoubledField::from_nodal(u);
    const DoubledField V = DoubledField::from_nodal(v);
    const double c = product_c(U, U, V);
    const double boundary = (s.rhs + 0.5 * c) / (0.25 * g.h1());
    const double printed = -c + 0.5 * g.h1() * boundary;
    EXPECT_GT(std::abs(s.lhs - printed), 1e-3);
}

TEST(Green, ZeroBoundaryFormRequiresZeroBoundary) {
    const Grid g = Grid::centered_square(1.0, 4);
    EXPECT_THROW(zero_green_residual(GridFunction(g), GridFunction(g, 1.0), GridFunction(g, 1.0)), ContractError);
}

TEST(WillmoreEnergy, TrivialFields) {
    const Grid g = Grid::centered_square(1.0, 8);
    for (const auto& se : {SurfaceEnergy::isotropic(), SurfaceEnergy::quadratic_form(2, 1, 1),
                           SurfaceEnergy::regularized_abs(0.1)}) {
        EXPECT_EQ(willmore_energy(GridFunction(g), se), 0.0);
        EXPECT_NEAR(willmore_energy(GridFunction::sample(g, [](double x, double y) { return 2 * x - y; }), se), 0.0,
                    1e-24);
    }
}

TEST(WillmoreEnergy, MatchesPointwiseStencils) {
    std::mt19937_64 rng(3);
    const Grid g(0, 0, 1, 1.2, 7, 6);
    const GridFunction u = oracle::random_field(g, rng);
    const SurfaceEnergy se = SurfaceEnergy::regularized_abs(0.1);
    double direct = 0.0;
    for (int j = 1; j < 6; ++j) {
        for (int i = 1; i < 7; ++i) {
            const double h = mean_curvature(u, se, i, j);
            direct += h * h * cell_Q(u, i, j) * g.h1() * g.h2();
        }
    }
    EXPECT_NEAR(willmore_energy(u, se), direct, 1e-12 * direct);
    EXPECT_GE(willmore_energy(u, se), 0.0);
}

TEST(WillmoreEnergy, ParaboloidConvergesToQuadrature) {
    // u = (x^2 + y^2)/2 on [-1, 1]^2. The discrete sum covers the interior
    // dual volumes [-1 + h/2, 1 - h/2]^2; the reference integrates the
    // analytic H^2 Q over that square with a 2D Gauss-Legendre rule.
    auto integrand = [](double x, double y) {
        const double q2 = 1 + x * x + y * y;
        const double h = oracle::graph_mean_curvature(x, y, 1, 0, 1);
        return h * h * std::sqrt(q2);
    };
    auto quadrature = [&](double a) {
        // composite 5-point Gauss-Legendre on a 40 x 40 panel grid
        const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
        const double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                   0.2369268850561891};
        const int panels = 40;
        const double w = 2 * a / panels;
        double sum = 0;
        for (int pj = 0; pj < panels; ++pj) {
            for (int pi = 0; pi < panels; ++pi) {
                const double cx = -a + (pi + 0.5) * w;
                const double cy = -a + (pj + 0.5) * w;
                for (int s = 0; s < 5; ++s) {
                    for (int t = 0; t < 5; ++t) {
                        sum += weights[s] * weights[t] * integrand(cx + 0.5 * w * nodes[s], cy + 0.5 * w * nodes[t]);
                    }
                }
            }
        }
        return sum * 0.25 * w * w;
    };
    double errs[3];
    int k = 0;
    for (int n : {16, 32, 64}) {
        const Grid g = Grid::centered_square(1.0, n);
        const GridFunction u = GridFunction::sample(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
        const double discrete = willmore_energy(u, SurfaceEnergy::isotropic());
        errs[k++] = std::abs(discrete - quadrature(1.0 - 0.5 * g.h1()));
    }
    EXPECT_LT(errs[2], 1e-2);
    EXPECT_GT(oracle::order(errs[1], errs[2]), 1.8);
}

TEST(Dissipation, Examples) {
    const Grid g = Grid::centered_square(1.0, 6);
    std::mt19937_64 rng(8);
    const GridFunction u = oracle::random_field(g, rng);
    const GridFunction q = q_field(u);
    EXPECT_EQ(dissipation_step(u, u, 0.1, q), 0.0);
    GridFunction shifted = u;
    for (double& v : shifted.values()) v += 0.3;
    double expect = 0.0;
    for (int j = 1; j < 6; ++j) {
        for (int i = 1; i < 6; ++i) expect += (0.3 / 0.01) * (0.3 / 0.01) * g.h1() * g.h2() / q(i, j);
    }
    EXPECT_NEAR(dissipation_step(u, shifted, 0.01, q), expect, 1e-12 * expect);
    const GridFunction v = oracle::random_field(g, rng);
    double direct = 0.0;
    for (int j = 1; j < 6; ++j) {
        for (int i = 1; i < 6; ++i) {
            const double r = (v(i, j) - u(i, j)) / 0.2;
            direct += r * r / q(i, j) * g.h1() * g.h2();
        }
    }
    EXPECT_NEAR(dissipation_step(u, v, 0.2, q), direct, 1e-12 * direct);
    EXPECT_THROW(dissipation_step(u, v, 0.0, q), ContractError);
}

TEST(QField, InteriorIsCellQ) {
    std::mt19937_64 rng(10);
    const Grid g(0, 0, 1, 1, 5, 7);
    const GridFunction u = oracle::random_field(g, rng);
    const GridFunction q = q_field(u);
    for (int j = 1; j < 7; ++j) {
        for (int i = 1; i < 5; ++i) EXPECT_NEAR(q(i, j), cell_Q(u, i, j), 1e-14);
    }
    EXPECT_EQ(q(0, 0), q(1, 1));
    EXPECT_EQ(q(5, 3), q(4, 3));
}

TEST(EnergyMonitor, ReportsAndViolations) {
    const Grid g = Grid::centered_square(1.0, 8);
    const SurfaceEnergy se = SurfaceEnergy::isotropic();
    const GridFunction u0 = GridFunction::sample(g, [](double x, double y) { return 0.2 * std::cos(x) * std::cos(y); });
    EnergyMonitor mon(se, u0, 0.0);
    ASSERT_EQ(mon.reports().size(), 1u);
    EXPECT_DOUBLE_EQ(mon.reports()[0].willmore, willmore_energy(u0, se));
    GridFunction u1 = u0;
    u1 *= 0.5;
    const EnergyReport r1 = mon.observe(0.1, u1);
    EXPECT_DOUBLE_EQ(r1.dt, 0.1);
    EXPECT_EQ(r1.drift, 0.0);
    EXPECT_NEAR(r1.dissipation, dissipation_step(u0, u1, 0.1, q_field(u1)), 1e-15);
    const EnergyReport r2 = mon.observe(0.3, u0);
    EXPECT_DOUBLE_EQ(r2.dt, 0.2);
    EXPECT_EQ(r2.drift, 0.0);
    GridFunction u3 = u0;
    u3 *= 2.0;
    const EnergyReport r3 = mon.observe(0.35, u3);
    EXPECT_NEAR(r3.drift, r3.willmore - mon.reports()[0].willmore, 1e-15);
    const auto bad = dissipation_violations(mon.reports(), 1e-6);
    ASSERT_EQ(bad.size(), 2u);
    EXPECT_EQ(bad[0], 2u);
    EXPECT_EQ(bad[1], 3u);
    EXPECT_EQ(dissipation_violations(mon.reports(), 1e-6, 10.0, 3).size(), 1u);
}
