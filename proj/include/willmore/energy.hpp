#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "willmore/anisotropy.hpp"
#include "willmore/grid.hpp"
#include "willmore/spatial.hpp"

namespace willmore {

/// Grid function on the doubled lattice of a square grid: indices k, l run
/// over 0..2N, even-even entries are the nodes and the remaining entries sit
/// on dual-volume edges and corners.
class DoubledField {
public:
    enum class Axis { K, L };
    enum class Difference { Forward, Backward, Central };

    /// Zero field. Throws ContractError unless n1 == n2 and h1 == h2.
    explicit DoubledField(const Grid& grid, double fill = 0.0);

    /// U_{2i,2j} = u_ij; entries between nodes average the two flanking
    /// nodes, U_{k,l} = (u_{i,j} + u_{i+a,j+b}) / 2 with (a, b) the odd
    /// parities of (k, l).
    static DoubledField from_nodal(const GridFunction& u);

    const Grid& grid() const noexcept { return grid_; }
    int n() const noexcept { return grid_.n1(); }
    int size() const noexcept { return 2 * grid_.n1() + 1; }
    double h() const noexcept { return grid_.h1(); }

    double operator()(int k, int l) const noexcept { return values_[offset(k, l)]; }
    double& operator()(int k, int l) noexcept { return values_[offset(k, l)]; }

    /// Differences on the half step h/2. Forward at k = 2N falls back to
    /// backward and backward at k = 0 to forward, so Central is one-sided on
    /// the edges of the lattice.
    DoubledField difference(Axis axis, Difference kind) const;

    /// Pointwise product.
    DoubledField operator*(const DoubledField& other) const;

private:
    std::size_t offset(int k, int l) const noexcept {
        return static_cast<std::size_t>(l) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(k);
    }

    Grid grid_;
    std::vector<double> values_;
};

/// (h^2 / 4) sum_{k=p..P, l=q..Q} F_kl G_kl. Throws ContractError on grid
/// mismatch, inverted or out-of-range bounds.
double bracket(const DoubledField& f, const DoubledField& g, int p, int q, int P, int Q);

/// [F, G] over 1..2N-1 in both indices.
double product_h(const DoubledField& f, const DoubledField& g);

/// (F, G_c.)_c = [F, G_f.]_{0,1}^{2N-1,2N-1} + [F, G_b.]_{1,1}^{2N,2N-1} for
/// Axis::K, and the transposed bounds for Axis::L.
double product_c(const DoubledField& f, const DoubledField& g, DoubledField::Axis axis);

/// (F, grad^h G)_c = (F1, G_c.)_c + (F2, G_.c)_c.
double product_c(const DoubledField& f1, const DoubledField& f2, const DoubledField& g);

/// Both sides of the summation-by-parts identity for U, V = doubled u, v:
///
///   (U_c., V)_h + (U_.c, V)_h = -1/2 (U, grad^h V)_c
///       + h/4 sum_{l=1}^{2N-1} [(U_{2N-1,l} + U_{2N,l}) V_{2N,l} - (U_{0l} + U_{1l}) V_{0l}]
///       + h/4 sum_{k=1}^{2N-1} [(U_{k,2N-1} + U_{k,2N}) V_{k,2N} - (U_{k0} + U_{k1}) V_{k0}].
///
/// The 1/2 reflects that the c-products sum the forward and the backward
/// bracket without averaging them.
struct GreenSides {
    double lhs;
    double rhs;
};
GreenSides green_sides(const GridFunction& u, const GridFunction& v);

/// |lhs - rhs| of green_sides. When v vanishes on the boundary, the result is
/// the larger of that and zero_green_residual(u, v, 1).
double green_residual(const GridFunction& u, const GridFunction& v);

/// |(div^h F, V)_h + 1/2 (F, grad^h V)_c| with F = P grad^h U, one-sided
/// differences on the lattice edges. Requires v = 0 on the boundary
/// (ContractError otherwise).
double zero_green_residual(const GridFunction& u, const GridFunction& v, const GridFunction& p);

/// sum over interior nodes of H^2 Q h1 h2, with H and Q as in the spatial
/// operator. The boundary values of u must already be set.
double willmore_energy(const GridFunction& u, const SurfaceEnergy& energy);

/// sum over interior nodes of ((u_next - u_prev) / dt)^2 / Q h1 h2.
double dissipation_step(const GridFunction& u_prev, const GridFunction& u_next, double dt, const GridFunction& q);

/// Interior Q of u with boundary nodes copied from their nearest interior node.
GridFunction q_field(const GridFunction& u);

struct EnergyReport {
    double t = 0.0;
    double dt = 0.0;  // size of the step that reached t; 0 for the initial report
    double willmore = 0.0;
    double dissipation = 0.0;
    double drift = 0.0;  // max(0, willmore - initial willmore)
};

/// Tracks the discrete Willmore energy along accepted steps. States passed in
/// must carry their boundary values.
class EnergyMonitor {
public:
    EnergyMonitor(const SurfaceEnergy& energy, const GridFunction& u0, double t0);

    const EnergyReport& observe(double t, const GridFunction& u);

    const std::vector<EnergyReport>& reports() const noexcept { return reports_; }

private:
    SurfaceEnergy energy_;
    GridFunction prev_;
    double initial_;
    std::vector<EnergyReport> reports_;
};

/// Indices k >= first of reports whose energy exceeds the previous one by
/// more than slack_factor * tolerance * dt_k.
std::vector<std::size_t> dissipation_violations(std::span<const EnergyReport> reports, double tolerance,
                                                double slack_factor = 10.0, std::size_t first = 1);

}  // namespace willmore
