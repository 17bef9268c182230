#include "willmore/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "willmore/error.hpp"

namespace willmore {

namespace {

void require_same(const DoubledField& a, const DoubledField& b, const char* what) {
    if (!(a.grid() == b.grid())) throw ContractError(std::string(what) + ": fields live on different grids");
}

void require_same(const GridFunction& a, const GridFunction& b, const char* what) {
    if (!(a.grid() == b.grid())) throw ContractError(std::string(what) + ": fields live on different grids");
}

bool zero_on_boundary(const GridFunction& v) {
    const Grid& g = v.grid();
    for (int j = 0; j <= g.n2(); ++j) {
        for (int i = 0; i <= g.n1(); ++i) {
            if (g.is_boundary(i, j) && v(i, j) != 0.0) return false;
        }
    }
    return true;
}

// Edge slopes of u: x-edges (i, j)-(i+1, j) for j in 1..n2-1 and y-edges
// (i, j)-(i, j+1) for i in 1..n1-1, laid out as in the spatial operator.
struct EdgeSlopes {
    std::vector<GradientVec> x, y;
};

EdgeSlopes edge_slopes(const GridFunction& u) {
    const Grid& g = u.grid();
    const std::size_t stride = static_cast<std::size_t>(g.n1() + 1);
    EdgeSlopes s;
    s.x.resize(static_cast<std::size_t>(g.n1()) * static_cast<std::size_t>(g.n2() + 1));
    s.y.resize(stride * static_cast<std::size_t>(g.n2()));
    for (int j = 1; j < g.n2(); ++j) {
        for (int i = 0; i < g.n1(); ++i) {
            s.x[static_cast<std::size_t>(j * g.n1() + i)] =
                detail::x_edge_gradient(u.values(), stride, g.index(i, j), g.h1(), g.h2());
        }
    }
    for (int j = 0; j < g.n2(); ++j) {
        for (int i = 1; i < g.n1(); ++i) {
            s.y[g.index(i, j)] = detail::y_edge_gradient(u.values(), stride, g.index(i, j), g.h1(), g.h2());
        }
    }
    return s;
}

double q_of(const GradientVec& p) { return std::sqrt(1.0 + p.p1 * p.p1 + p.p2 * p.p2); }

}  // namespace

DoubledField::DoubledField(const Grid& grid, double fill) : grid_(grid) {
    if (grid.n1() != grid.n2() || grid.h1() != grid.h2()) {
        throw ContractError("DoubledField: requires a square grid with n1 == n2 and h1 == h2");
    }
    const auto s = static_cast<std::size_t>(size());
    values_.assign(s * s, fill);
}

DoubledField DoubledField::from_nodal(const GridFunction& u) {
    DoubledField d(u.grid());
    const int m = d.size();
    for (int l = 0; l < m; ++l) {
        for (int k = 0; k < m; ++k) {
            const int i = k / 2;
            const int j = l / 2;
            d(k, l) = 0.5 * (u(i, j) + u(i + k % 2, j + l % 2));
        }
    }
    return d;
}

DoubledField DoubledField::difference(Axis axis, Difference kind) const {
    DoubledField out(grid_);
    const int m = size();
    const int last = m - 1;
    const double scale = 2.0 / h();
    auto at = [&](int a, int b) { return axis == Axis::K ? (*this)(a, b) : (*this)(b, a); };
    for (int b = 0; b < m; ++b) {
        for (int a = 0; a < m; ++a) {
            const double fwd = a < last ? scale * (at(a + 1, b) - at(a, b)) : scale * (at(a, b) - at(a - 1, b));
            const double bwd = a > 0 ? scale * (at(a, b) - at(a - 1, b)) : fwd;
            const double v = kind == Difference::Forward ? fwd : kind == Difference::Backward ? bwd : 0.5 * (fwd + bwd);
            if (axis == Axis::K) {
                out(a, b) = v;
            } else {
                out(b, a) = v;
            }
        }
    }
    return out;
}

DoubledField DoubledField::operator*(const DoubledField& other) const {
    require_same(*this, other, "DoubledField::operator*");
    DoubledField out(grid_);
    for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = values_[k] * other.values_[k];
    return out;
}

double bracket(const DoubledField& f, const DoubledField& g, int p, int q, int P, int Q) {
    require_same(f, g, "bracket");
    const int last = f.size() - 1;
    if (p < 0 || q < 0 || P > last || Q > last) {
        throw ContractError("bracket: bounds must lie in 0.." + std::to_string(last));
    }
    if (p > P || q > Q) throw ContractError("bracket: inverted bounds");
    double sum = 0.0;
    for (int l = q; l <= Q; ++l) {
        for (int k = p; k <= P; ++k) sum += f(k, l) * g(k, l);
    }
    return 0.25 * f.h() * f.h() * sum;
}

double product_h(const DoubledField& f, const DoubledField& g) {
    const int m = f.size() - 2;
    return bracket(f, g, 1, 1, m, m);
}

double product_c(const DoubledField& f, const DoubledField& g, DoubledField::Axis axis) {
    using D = DoubledField::Difference;
    const int two_n = f.size() - 1;
    const DoubledField fwd = g.difference(axis, D::Forward);
    const DoubledField bwd = g.difference(axis, D::Backward);
    if (axis == DoubledField::Axis::K) {
        return bracket(f, fwd, 0, 1, two_n - 1, two_n - 1) + bracket(f, bwd, 1, 1, two_n, two_n - 1);
    }
    return bracket(f, fwd, 1, 0, two_n - 1, two_n - 1) + bracket(f, bwd, 1, 1, two_n - 1, two_n);
}

double product_c(const DoubledField& f1, const DoubledField& f2, const DoubledField& g) {
    return product_c(f1, g, DoubledField::Axis::K) + product_c(f2, g, DoubledField::Axis::L);
}

GreenSides green_sides(const GridFunction& u, const GridFunction& v) {
    using D = DoubledField::Difference;
    using A = DoubledField::Axis;
    require_same(u, v, "green_sides");
    const DoubledField U = DoubledField::from_nodal(u);
    const DoubledField V = DoubledField::from_nodal(v);
    const int two_n = U.size() - 1;
    const double h = U.h();

    const double lhs = product_h(U.difference(A::K, D::Central), V) + product_h(U.difference(A::L, D::Central), V);

    double boundary_k = 0.0;
    double boundary_l = 0.0;
    for (int m = 1; m < two_n; ++m) {
        boundary_k += (U(two_n - 1, m) + U(two_n, m)) * V(two_n, m) - (U(0, m) + U(1, m)) * V(0, m);
        boundary_l += (U(m, two_n - 1) + U(m, two_n)) * V(m, two_n) - (U(m, 0) + U(m, 1)) * V(m, 0);
    }
    const double rhs = -0.5 * product_c(U, U, V) + 0.25 * h * (boundary_k + boundary_l);
    return {lhs, rhs};
}

double green_residual(const GridFunction& u, const GridFunction& v) {
    const GreenSides s = green_sides(u, v);
    double r = std::abs(s.lhs - s.rhs);
    if (zero_on_boundary(v)) r = std::max(r, zero_green_residual(u, v, GridFunction(u.grid(), 1.0)));
    return r;
}

double zero_green_residual(const GridFunction& u, const GridFunction& v, const GridFunction& p) {
    using D = DoubledField::Difference;
    using A = DoubledField::Axis;
    require_same(u, v, "zero_green_residual");
    require_same(u, p, "zero_green_residual");
    if (!zero_on_boundary(v)) throw ContractError("zero_green_residual: v must vanish on the boundary");
    const DoubledField U = DoubledField::from_nodal(u);
    const DoubledField V = DoubledField::from_nodal(v);
    const DoubledField P = DoubledField::from_nodal(p);
    const DoubledField f1 = P * U.difference(A::K, D::Central);
    const DoubledField f2 = P * U.difference(A::L, D::Central);
    const double lhs = product_h(f1.difference(A::K, D::Central), V) + product_h(f2.difference(A::L, D::Central), V);
    const double rhs = -0.5 * product_c(f1, f2, V);
    return std::abs(lhs - rhs);
}

double willmore_energy(const GridFunction& u, const SurfaceEnergy& energy) {
    const Grid& g = u.grid();
    const EdgeSlopes s = edge_slopes(u);
    std::vector<double> px(s.x.size()), qx(s.x.size()), py(s.y.size()), qy(s.y.size());
    for (int j = 1; j < g.n2(); ++j) {
        for (int i = 0; i < g.n1(); ++i) {
            const auto k = static_cast<std::size_t>(j * g.n1() + i);
            px[k] = energy.grad_p(s.x[k]).p1;
            qx[k] = q_of(s.x[k]);
        }
    }
    for (int j = 0; j < g.n2(); ++j) {
        for (int i = 1; i < g.n1(); ++i) {
            const std::size_t k = g.index(i, j);
            py[k] = energy.grad_p(s.y[k]).p2;
            qy[k] = q_of(s.y[k]);
        }
    }
    double sum = 0.0;
    for (int j = 1; j < g.n2(); ++j) {
        for (int i = 1; i < g.n1(); ++i) {
            const auto e = static_cast<std::size_t>(j * g.n1() + i);
            const std::size_t n = g.index(i, j);
            const std::size_t s_edge = g.index(i, j - 1);
            const double h = (px[e] - px[e - 1]) / g.h1() + (py[n] - py[s_edge]) / g.h2();
            const double q = 0.25 * (qx[e] + qx[e - 1] + qy[n] + qy[s_edge]);
            sum += h * h * q;
        }
    }
    return sum * g.h1() * g.h2();
}

double dissipation_step(const GridFunction& u_prev, const GridFunction& u_next, double dt, const GridFunction& q) {
    if (!(dt > 0.0)) throw ContractError("dissipation_step: dt must be positive");
    require_same(u_prev, u_next, "dissipation_step");
    require_same(u_prev, q, "dissipation_step");
    const Grid& g = u_prev.grid();
    double sum = 0.0;
    for (int j = 1; j < g.n2(); ++j) {
        for (int i = 1; i < g.n1(); ++i) {
            const double rate = (u_next(i, j) - u_prev(i, j)) / dt;
            sum += rate * rate / q(i, j);
        }
    }
    return sum * g.h1() * g.h2();
}

GridFunction q_field(const GridFunction& u) {
    const Grid& g = u.grid();
    const EdgeSlopes s = edge_slopes(u);
    GridFunction q(g);
    for (int j = 1; j < g.n2(); ++j) {
        for (int i = 1; i < g.n1(); ++i) {
            const auto e = static_cast<std::size_t>(j * g.n1() + i);
            q(i, j) = 0.25 * (q_of(s.x[e]) + q_of(s.x[e - 1]) + q_of(s.y[g.index(i, j)]) +
                              q_of(s.y[g.index(i, j - 1)]));
        }
    }
    for (int j = 0; j <= g.n2(); ++j) {
        for (int i = 0; i <= g.n1(); ++i) {
            if (g.is_boundary(i, j)) q(i, j) = q(std::clamp(i, 1, g.n1() - 1), std::clamp(j, 1, g.n2() - 1));
        }
    }
    return q;
}

EnergyMonitor::EnergyMonitor(const SurfaceEnergy& energy, const GridFunction& u0, double t0)
    : energy_(energy), prev_(u0), initial_(willmore_energy(u0, energy)) {
    reports_.push_back({t0, 0.0, initial_, 0.0, 0.0});
}

const EnergyReport& EnergyMonitor::observe(double t, const GridFunction& u) {
    const double dt = t - reports_.back().t;
    EnergyReport r;
    r.t = t;
    r.dt = dt;
    r.willmore = willmore_energy(u, energy_);
    r.dissipation = dt > 0.0 ? dissipation_step(prev_, u, dt, q_field(u)) : 0.0;
    r.drift = std::max(0.0, r.willmore - initial_);
    prev_ = u;
    reports_.push_back(r);
    return reports_.back();
}

std::vector<std::size_t> dissipation_violations(std::span<const EnergyReport> reports, double tolerance,
                                                double slack_factor, std::size_t first) {
    std::vector<std::size_t> out;
    for (std::size_t k = std::max<std::size_t>(first, 1); k < reports.size(); ++k) {
        if (reports[k].willmore > reports[k - 1].willmore + slack_factor * tolerance * reports[k].dt) {
            out.push_back(k);
        }
    }
    return out;
}

}  // namespace willmore
