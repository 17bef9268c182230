#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "willmore/anisotropy.hpp"
#include "willmore/grid.hpp"

namespace willmore {

/// Scalar field of (x, y, t).
using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

/// Writes a forcing value for every node of the closure at time t.
using NodalForcing = std::function<void(double t, std::span<double> out)>;

struct BoundaryCondition {
    enum class Kind { Dirichlet, NeumannHomogeneous };

    Kind kind = Kind::NeumannHomogeneous;
    SpaceTimeFunction g1;  // u on the boundary (Dirichlet)
    SpaceTimeFunction g2;  // w_gamma on the boundary (Dirichlet)

    static BoundaryCondition dirichlet(SpaceTimeFunction g1, SpaceTimeFunction g2);
    static BoundaryCondition zero_dirichlet();
    static BoundaryCondition neumann();
};

/// Semidiscrete anisotropic Willmore flow
///   du/dt = -Q div(E grad w - (1/2) w^2 / Q^3 grad u) + F,   w = Q H_gamma.
struct FlowProblem {
    Grid grid;
    SurfaceEnergy energy;
    BoundaryCondition bc;
    SpaceTimeFunction forcing;   // pointwise at nodes; empty: unforced
    NodalForcing nodal_forcing;  // takes precedence over `forcing` when set
};

/// sqrt(1 + |grad u|^2) at the edge midpoint.
double edge_Q(const GridFunction& u, const EdgeId& e);

/// Mean of the four edge values of the dual volume of interior node (i, j).
double cell_Q(const GridFunction& u, int i, int j);

/// Divergence of grad_p gamma over the dual volume of interior node (i, j).
double mean_curvature(const GridFunction& u, const SurfaceEnergy& energy, int i, int j);

/// Q H_gamma at interior nodes; boundary values from the boundary condition at time t.
GridFunction w_field(const GridFunction& u, const SurfaceEnergy& energy, const BoundaryCondition& bc,
                     double t = 0.0);

/// Two-point average of w across edge e.
double edge_w(const GridFunction& w, const EdgeId& e);

/// Full 2x2 Hessian of gamma at the edge gradient of u.
Hessian2 edge_hessian(const GridFunction& u, const SurfaceEnergy& energy, const EdgeId& e);

/// Overwrites boundary values of u and then of w.
///
/// Dirichlet: u = g1, w = g2. Neumann: u is copied from the adjacent interior
/// node; w is solved from E_nn dw/dn + E_nt dw/dt = 0 on the boundary edge,
/// with the tangential derivative taken along the adjacent interior line.
/// Corners take the mean of their two boundary neighbours. Returns the number
/// of boundary nodes where |E_nn| < 1e-12 forced a plain copy for w.
std::size_t apply_bc(const FlowProblem& problem, GridFunction& u, GridFunction& w, double t);

/// Boundary values of u only.
void apply_u_bc(const FlowProblem& problem, GridFunction& u, double t);

/// du/dt at every node (zero on the boundary). Throws DivergenceError on
/// non-finite output.
GridFunction rhs(const FlowProblem& problem, const GridFunction& u, double t);

/// Nodal diagnostics of a state with boundary values applied.
struct FlowFields {
    GridFunction u;
    GridFunction w;
    GridFunction Q;  // boundary nodes copy their nearest interior node
    GridFunction H;  // w / Q
};

/// Assembled right-hand side with reusable workspace. Per-edge quantities
/// are evaluated once and shared by both adjacent dual volumes, so the flux
/// divergence is conservative before the Q scaling.
///
/// Not safe for concurrent use of one instance; the free function rhs()
/// builds a private instance.
class SpatialOperator {
public:
    explicit SpatialOperator(FlowProblem problem);

    const FlowProblem& problem() const noexcept { return problem_; }

    /// dudt = rhs(u, t). Both spans cover the closure in node order.
    void evaluate(double t, std::span<const double> u, std::span<double> dudt);

    FlowFields fields(double t, std::span<const double> u);

    /// Total count of degenerate Neumann w extractions seen so far.
    std::size_t neumann_fallbacks() const noexcept { return fallbacks_; }

    /// Signed normal flux through the edge east of node (i, j) after the last
    /// evaluate(); i in 0..n1-1, j in 1..n2-1.
    double x_flux(int i, int j) const noexcept { return flux_x_[xk(i, j)]; }
    /// Same for the edge north of node (i, j); i in 1..n1-1, j in 0..n2-1.
    double y_flux(int i, int j) const noexcept { return flux_y_[yk(i, j)]; }

private:
    void prepare(double t, std::span<const double> u);
    std::size_t xk(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(problem_.grid.n1()) +
               static_cast<std::size_t>(i);
    }
    std::size_t yk(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(problem_.grid.n1() + 1) +
               static_cast<std::size_t>(i);
    }

    FlowProblem problem_;
    std::vector<double> u_;
    std::vector<double> w_;
    std::vector<double> qc_;
    // x-edges (i, j)-(i+1, j) and y-edges (i, j)-(i, j+1)
    std::vector<double> qx_, qy_;
    std::vector<double> dnx_, dny_;  // normal derivative of u
    std::vector<double> px_, py_;    // normal component of grad_p gamma
    std::vector<Hessian2> ex_, ey_;
    std::vector<double> flux_x_, flux_y_;
    std::vector<double> force_;
    std::size_t fallbacks_ = 0;
};

}  // namespace willmore
