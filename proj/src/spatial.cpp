#include "willmore/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace willmore {

namespace {

constexpr double kDegenerateHessian = 1e-12;

enum class Side { Left, Right, Bottom, Top };

void require_interior(const Grid& g, int i, int j, const char* op) {
    if (!g.is_interior(i, j)) {
        throw ContractError(std::string(op) + ": node (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") is not an interior node");
    }
}

void set_u_boundary(const Grid& g, const BoundaryCondition& bc, std::span<double> u, double t) {
    const int n1 = g.n1();
    const int n2 = g.n2();
    if (bc.kind == BoundaryCondition::Kind::Dirichlet) {
        for (int i = 0; i <= n1; ++i) {
            u[g.index(i, 0)] = bc.g1(g.x(i), g.y(0), t);
            u[g.index(i, n2)] = bc.g1(g.x(i), g.y(n2), t);
        }
        for (int j = 1; j < n2; ++j) {
            u[g.index(0, j)] = bc.g1(g.x(0), g.y(j), t);
            u[g.index(n1, j)] = bc.g1(g.x(n1), g.y(j), t);
        }
        return;
    }
    for (int j = 1; j < n2; ++j) {
        u[g.index(0, j)] = u[g.index(1, j)];
        u[g.index(n1, j)] = u[g.index(n1 - 1, j)];
    }
    for (int i = 1; i < n1; ++i) {
        u[g.index(i, 0)] = u[g.index(i, 1)];
        u[g.index(i, n2)] = u[g.index(i, n2 - 1)];
    }
    u[g.index(0, 0)] = 0.5 * (u[g.index(1, 0)] + u[g.index(0, 1)]);
    u[g.index(n1, 0)] = 0.5 * (u[g.index(n1 - 1, 0)] + u[g.index(n1, 1)]);
    u[g.index(0, n2)] = 0.5 * (u[g.index(1, n2)] + u[g.index(0, n2 - 1)]);
    u[g.index(n1, n2)] = 0.5 * (u[g.index(n1 - 1, n2)] + u[g.index(n1, n2 - 1)]);
}

// Derivative along an interior line at position k (1 <= k <= n - 1): central
// where both neighbours are interior, one-sided at the ends.
template <class Get>
double tangential(Get&& get, int k, int n, double h) {
    const bool has_lo = k - 1 >= 1;
    const bool has_hi = k + 1 <= n - 1;
    if (has_lo && has_hi) return (get(k + 1) - get(k - 1)) / (2.0 * h);
    if (has_hi) return (get(k + 1) - get(k)) / h;
    if (has_lo) return (get(k) - get(k - 1)) / h;
    return 0.0;
}

// Boundary values of w. `hess(side, k)` returns the Hessian on the boundary
// edge crossing the boundary at node index k along that side.
template <class EdgeHess>
std::size_t set_w_boundary(const Grid& g, const BoundaryCondition& bc, std::span<double> w, double t,
                           EdgeHess&& hess) {
    const int n1 = g.n1();
    const int n2 = g.n2();
    if (bc.kind == BoundaryCondition::Kind::Dirichlet) {
        for (int i = 0; i <= n1; ++i) {
            w[g.index(i, 0)] = bc.g2(g.x(i), g.y(0), t);
            w[g.index(i, n2)] = bc.g2(g.x(i), g.y(n2), t);
        }
        for (int j = 1; j < n2; ++j) {
            w[g.index(0, j)] = bc.g2(g.x(0), g.y(j), t);
            w[g.index(n1, j)] = bc.g2(g.x(n1), g.y(j), t);
        }
        return 0;
    }

    std::size_t fallbacks = 0;
    const double h1 = g.h1();
    const double h2 = g.h2();
    for (int j = 1; j < n2; ++j) {
        for (const Side side : {Side::Left, Side::Right}) {
            const int ib = side == Side::Left ? 0 : n1;
            const int ii = side == Side::Left ? 1 : n1 - 1;
            const double inner = w[g.index(ii, j)];
            const Hessian2 e = hess(side, j);
            if (std::abs(e.e11) < kDegenerateHessian) {
                w[g.index(ib, j)] = inner;
                ++fallbacks;
                continue;
            }
            const double dt = tangential([&](int k) { return w[g.index(ii, k)]; }, j, n2, h2);
            // e11 * (w_outer - w_inner) / (+-h1) + e12 * dt = 0
            const double jump = h1 * e.e12 * dt / e.e11;
            w[g.index(ib, j)] = side == Side::Left ? inner + jump : inner - jump;
        }
    }
    for (int i = 1; i < n1; ++i) {
        for (const Side side : {Side::Bottom, Side::Top}) {
            const int jb = side == Side::Bottom ? 0 : n2;
            const int ji = side == Side::Bottom ? 1 : n2 - 1;
            const double inner = w[g.index(i, ji)];
            const Hessian2 e = hess(side, i);
            if (std::abs(e.e22) < kDegenerateHessian) {
                w[g.index(i, jb)] = inner;
                ++fallbacks;
                continue;
            }
            const double dt = tangential([&](int k) { return w[g.index(k, ji)]; }, i, n1, h1);
            const double jump = h2 * e.e21 * dt / e.e22;
            w[g.index(i, jb)] = side == Side::Bottom ? inner + jump : inner - jump;
        }
    }
    w[g.index(0, 0)] = 0.5 * (w[g.index(1, 0)] + w[g.index(0, 1)]);
    w[g.index(n1, 0)] = 0.5 * (w[g.index(n1 - 1, 0)] + w[g.index(n1, 1)]);
    w[g.index(0, n2)] = 0.5 * (w[g.index(1, n2)] + w[g.index(0, n2 - 1)]);
    w[g.index(n1, n2)] = 0.5 * (w[g.index(n1 - 1, n2)] + w[g.index(n1, n2 - 1)]);
    return fallbacks;
}

EdgeId boundary_edge(const Grid& g, Side side, int k) {
    switch (side) {
        case Side::Left: return {1, k, Direction::West};
        case Side::Right: return {g.n1() - 1, k, Direction::East};
        case Side::Bottom: return {k, 1, Direction::South};
        case Side::Top: return {k, g.n2() - 1, Direction::North};
    }
    return {0, 0, Direction::East};
}

void require_same_grid(const GridFunction& a, const Grid& g, const char* what) {
    if (!(a.grid() == g)) throw ContractError(std::string(what) + ": grid mismatch");
}

}  // namespace

BoundaryCondition BoundaryCondition::dirichlet(SpaceTimeFunction g1, SpaceTimeFunction g2) {
    if (!g1 || !g2) throw ContractError("BoundaryCondition: Dirichlet data must be callable");
    return {Kind::Dirichlet, std::move(g1), std::move(g2)};
}

BoundaryCondition BoundaryCondition::zero_dirichlet() {
    auto zero = [](double, double, double) { return 0.0; };
    return {Kind::Dirichlet, zero, zero};
}

BoundaryCondition BoundaryCondition::neumann() { return {Kind::NeumannHomogeneous, {}, {}}; }

double edge_Q(const GridFunction& u, const EdgeId& e) {
    const GradientVec d = edge_gradient(u, e);
    return std::sqrt(1.0 + d.p1 * d.p1 + d.p2 * d.p2);
}

double cell_Q(const GridFunction& u, int i, int j) {
    require_interior(u.grid(), i, j, "cell_Q");
    return 0.25 * (edge_Q(u, {i, j, Direction::East}) + edge_Q(u, {i, j, Direction::North}) +
                   edge_Q(u, {i, j, Direction::West}) + edge_Q(u, {i, j, Direction::South}));
}

double mean_curvature(const GridFunction& u, const SurfaceEnergy& energy, int i, int j) {
    const Grid& g = u.grid();
    require_interior(g, i, j, "mean_curvature");
    const double east = energy.grad_p(edge_gradient(u, {i, j, Direction::East})).p1;
    const double west = energy.grad_p(edge_gradient(u, {i, j, Direction::West})).p1;
    const double north = energy.grad_p(edge_gradient(u, {i, j, Direction::North})).p2;
    const double south = energy.grad_p(edge_gradient(u, {i, j, Direction::South})).p2;
    return (east - west) / g.h1() + (north - south) / g.h2();
}

GridFunction w_field(const GridFunction& u, const SurfaceEnergy& energy, const BoundaryCondition& bc, double t) {
    const Grid& g = u.grid();
    GridFunction w(g);
    for (int j = 1; j < g.n2(); ++j) {
        for (int i = 1; i < g.n1(); ++i) {
            w(i, j) = cell_Q(u, i, j) * mean_curvature(u, energy, i, j);
        }
    }
    set_w_boundary(g, bc, w.values(), t,
                   [&](Side side, int k) { return edge_hessian(u, energy, boundary_edge(g, side, k)); });
    return w;
}

double edge_w(const GridFunction& w, const EdgeId& e) {
    return 0.5 * (w.at(e.i, e.j) + w.at(e.neighbor_i(), e.neighbor_j()));
}

Hessian2 edge_hessian(const GridFunction& u, const SurfaceEnergy& energy, const EdgeId& e) {
    return energy.hessian(edge_gradient(u, e));
}

void apply_u_bc(const FlowProblem& problem, GridFunction& u, double t) {
    require_same_grid(u, problem.grid, "apply_bc");
    set_u_boundary(problem.grid, problem.bc, u.values(), t);
}

std::size_t apply_bc(const FlowProblem& problem, GridFunction& u, GridFunction& w, double t) {
    require_same_grid(w, problem.grid, "apply_bc");
    apply_u_bc(problem, u, t);
    const Grid& g = problem.grid;
    return set_w_boundary(g, problem.bc, w.values(), t, [&](Side side, int k) {
        return edge_hessian(u, problem.energy, boundary_edge(g, side, k));
    });
}

GridFunction rhs(const FlowProblem& problem, const GridFunction& u, double t) {
    require_same_grid(u, problem.grid, "rhs");
    SpatialOperator op(problem);
    GridFunction out(problem.grid);
    op.evaluate(t, u.values(), out.values());
    return out;
}

SpatialOperator::SpatialOperator(FlowProblem problem) : problem_(std::move(problem)) {
    const Grid& g = problem_.grid;
    if (problem_.bc.kind == BoundaryCondition::Kind::Dirichlet && (!problem_.bc.g1 || !problem_.bc.g2)) {
        throw ContractError("SpatialOperator: Dirichlet data must be callable");
    }
    const std::size_t n1 = static_cast<std::size_t>(g.n1());
    const std::size_t n2 = static_cast<std::size_t>(g.n2());
    u_.assign(g.node_count(), 0.0);
    w_.assign(g.node_count(), 0.0);
    qc_.assign(g.node_count(), 1.0);
    const std::size_t nx = n1 * (n2 + 1);
    const std::size_t ny = (n1 + 1) * n2;
    qx_.assign(nx, 1.0);
    dnx_.assign(nx, 0.0);
    px_.assign(nx, 0.0);
    ex_.assign(nx, Hessian2{});
    flux_x_.assign(nx, 0.0);
    qy_.assign(ny, 1.0);
    dny_.assign(ny, 0.0);
    py_.assign(ny, 0.0);
    ey_.assign(ny, Hessian2{});
    flux_y_.assign(ny, 0.0);
}

void SpatialOperator::prepare(double t, std::span<const double> u) {
    const Grid& g = problem_.grid;
    if (u.size() != g.node_count()) {
        throw ContractError("SpatialOperator: state has " + std::to_string(u.size()) + " values, expected " +
                            std::to_string(g.node_count()));
    }
    const SurfaceEnergy& energy = problem_.energy;
    const int n1 = g.n1();
    const int n2 = g.n2();
    const double h1 = g.h1();
    const double h2 = g.h2();
    const std::size_t stride = static_cast<std::size_t>(n1 + 1);

    std::copy(u.begin(), u.end(), u_.begin());
    set_u_boundary(g, problem_.bc, u_, t);

    // Edge quantities of u.
    for (int j = 1; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const GradientVec d = detail::x_edge_gradient(u_, stride, g.index(i, j), h1, h2);
            const std::size_t k = xk(i, j);
            qx_[k] = std::sqrt(1.0 + d.p1 * d.p1 + d.p2 * d.p2);
            dnx_[k] = d.p1;
            px_[k] = energy.grad_p(d).p1;
            ex_[k] = energy.hessian(d);
        }
    }
    for (int j = 0; j < n2; ++j) {
        for (int i = 1; i < n1; ++i) {
            const GradientVec d = detail::y_edge_gradient(u_, stride, g.index(i, j), h1, h2);
            const std::size_t k = yk(i, j);
            qy_[k] = std::sqrt(1.0 + d.p1 * d.p1 + d.p2 * d.p2);
            dny_[k] = d.p2;
            py_[k] = energy.grad_p(d).p2;
            ey_[k] = energy.hessian(d);
        }
    }

    // w = Q H on interior nodes.
    for (int j = 1; j < n2; ++j) {
        for (int i = 1; i < n1; ++i) {
            const double q =
                0.25 * (qx_[xk(i, j)] + qx_[xk(i - 1, j)] + qy_[yk(i, j)] + qy_[yk(i, j - 1)]);
            const double h = (px_[xk(i, j)] - px_[xk(i - 1, j)]) / h1 + (py_[yk(i, j)] - py_[yk(i, j - 1)]) / h2;
            qc_[g.index(i, j)] = q;
            w_[g.index(i, j)] = q * h;
        }
    }
    fallbacks_ += set_w_boundary(g, problem_.bc, w_, t, [&](Side side, int k) {
        switch (side) {
            case Side::Left: return ex_[xk(0, k)];
            case Side::Right: return ex_[xk(n1 - 1, k)];
            case Side::Bottom: return ey_[yk(k, 0)];
            case Side::Top: return ey_[yk(k, n2 - 1)];
        }
        return Hessian2{};
    });
}

void SpatialOperator::evaluate(double t, std::span<const double> u, std::span<double> dudt) {
    const Grid& g = problem_.grid;
    if (dudt.size() != g.node_count()) throw ContractError("SpatialOperator: output size mismatch");
    prepare(t, u);

    const int n1 = g.n1();
    const int n2 = g.n2();
    const double h1 = g.h1();
    const double h2 = g.h2();
    const std::size_t stride = static_cast<std::size_t>(n1 + 1);

    for (int j = 1; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const std::size_t node = g.index(i, j);
            const std::size_t k = xk(i, j);
            const GradientVec dw = detail::x_edge_gradient(w_, stride, node, h1, h2);
            const double wm = 0.5 * (w_[node] + w_[node + 1]);
            const double q = qx_[k];
            flux_x_[k] = ex_[k].apply(dw).p1 - 0.5 * wm * wm / (q * q * q) * dnx_[k];
        }
    }
    for (int j = 0; j < n2; ++j) {
        for (int i = 1; i < n1; ++i) {
            const std::size_t node = g.index(i, j);
            const std::size_t k = yk(i, j);
            const GradientVec dw = detail::y_edge_gradient(w_, stride, node, h1, h2);
            const double wm = 0.5 * (w_[node] + w_[node + stride]);
            const double q = qy_[k];
            flux_y_[k] = ey_[k].apply(dw).p2 - 0.5 * wm * wm / (q * q * q) * dny_[k];
        }
    }

    const bool nodal = static_cast<bool>(problem_.nodal_forcing);
    if (nodal) {
        force_.resize(g.node_count());
        problem_.nodal_forcing(t, force_);
    }
    std::fill(dudt.begin(), dudt.end(), 0.0);
    for (int j = 1; j < n2; ++j) {
        for (int i = 1; i < n1; ++i) {
            const double div = (flux_x_[xk(i, j)] - flux_x_[xk(i - 1, j)]) / h1 +
                               (flux_y_[yk(i, j)] - flux_y_[yk(i, j - 1)]) / h2;
            double v = -qc_[g.index(i, j)] * div;
            if (nodal) {
                v += force_[g.index(i, j)];
            } else if (problem_.forcing) {
                v += problem_.forcing(g.x(i), g.y(j), t);
            }
            if (!std::isfinite(v)) {
                throw DivergenceError("non-finite right-hand side at node (" + std::to_string(i) + ", " +
                                          std::to_string(j) + "), t = " + std::to_string(t),
                                      t, i, j);
            }
            dudt[g.index(i, j)] = v;
        }
    }
}

FlowFields SpatialOperator::fields(double t, std::span<const double> u) {
    const Grid& g = problem_.grid;
    prepare(t, u);
    FlowFields f{GridFunction(g, u_), GridFunction(g, w_), GridFunction(g, 1.0), GridFunction(g)};
    for (int j = 0; j <= g.n2(); ++j) {
        for (int i = 0; i <= g.n1(); ++i) {
            const int ci = std::clamp(i, 1, g.n1() - 1);
            const int cj = std::clamp(j, 1, g.n2() - 1);
            const double q = qc_[g.index(ci, cj)];
            f.Q(i, j) = q;
            f.H(i, j) = w_[g.index(i, j)] / q;
        }
    }
    return f;
}

}  // namespace willmore
