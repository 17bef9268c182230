#pragma once

#include <span>
#include <vector>

#include "willmore/anisotropy.hpp"
#include "willmore/grid.hpp"
#include "willmore/spatial.hpp"

namespace willmore::mms {

/// zeta(x, y, t) = cos(pi t) r^{-2n} (x^n - r^n)(y^n - r^n) exp(-sigma (x^2 + y^2)) on [-r, r]^2.
struct ZetaParams {
    double r = 4.0;
    int n = 2;
    double sigma = 1.0;

    /// Throws ContractError unless r > 0, n is positive and even, sigma > 0.
    void validate() const;
};

/// Value and spatial derivatives up to second order.
struct ZetaJet {
    double value;
    double dx, dy;
    double dxx, dxy, dyy;
};

double zeta(const ZetaParams& p, double x, double y, double t);
double zeta_dt(const ZetaParams& p, double x, double y, double t);
ZetaJet zeta_jet(const ZetaParams& p, double x, double y, double t);

/// w_gamma(zeta) = Q(zeta) sum_ab E_ab(grad zeta) d_a d_b zeta.
double w_exact(const SurfaceEnergy& energy, const ZetaParams& p, double x, double y, double t);

/// F = Q(zeta) div(E grad w - (1/2) w^2 / Q^3 grad zeta) + d_t zeta.
///
/// grad w and the outer divergence are central differences with step delta,
/// so the value carries an O(delta^2) evaluation error.
double forcing(const SurfaceEnergy& energy, const ZetaParams& p, double x, double y, double t, double delta);

/// Default forcing step: min(h1, h2) / 100.
double default_delta(const Grid& grid);

SpaceTimeFunction make_forcing(const SurfaceEnergy& energy, const ZetaParams& p, double delta);

/// Interior-node forcing tabulated in time on Chebyshev points of [t0, t1]
/// and evaluated by barycentric interpolation. Boundary nodes get zero.
class ForcingTable {
public:
    ForcingTable(const Grid& grid, const SpaceTimeFunction& f, double t0, double t1, int points = 12);

    /// Throws ContractError if t falls outside the tabulated window.
    void fill(double t, std::span<double> out) const;

    NodalForcing as_nodal() const;

private:
    Grid grid_;
    double t0_;
    double t1_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> values_;  // [node][point], interior nodes in closure order
    std::vector<std::size_t> interior_;
};

struct TimedField {
    double t;
    GridFunction field;
};

struct SpaceTimeNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

/// Discrete space-time norms of (field - exact) over the whole closure and
/// all time levels: L1 = sum tau |e| h1 h2, L2 = sqrt(sum tau e^2 h1 h2),
/// Linf = max |e|. Time levels must be uniformly spaced by tau.
SpaceTimeNorms spacetime_norms(std::span<const TimedField> snapshots, const SpaceTimeFunction& exact, double tau);
SpaceTimeNorms spacetime_norms(std::span<const TimedField> snapshots, const ZetaParams& p, double tau);

/// log(err1 / err2) / log(h1 / h2).
double eoc(double err1, double err2, double h1, double h2);

struct ErrorRecord {
    int mesh = 0;
    double h = 0.0;
    double err_l1 = 0.0;
    double err_l2 = 0.0;
    double err_linf = 0.0;
    bool failed = false;
};

struct EocRow {
    ErrorRecord record;
    // NaN on the first row and next to failed rows
    double eoc_l1;
    double eoc_l2;
    double eoc_linf;
};

/// EOC between each consecutive pair of a mesh ladder.
std::vector<EocRow> eoc_table(std::span<const ErrorRecord> records);

}  // namespace willmore::mms
