#include "willmore/mms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace willmore::mms {

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// f(s) = (s^n - r^n) exp(-sigma s^2) and its first two derivatives.
struct Factor {
    double f, d1, d2;
};

Factor factor(const ZetaParams& p, double s) {
    const int n = p.n;
    const double e = std::exp(-p.sigma * s * s);
    const double a = ipow(s, n) - ipow(p.r, n);
    const double sn1 = ipow(s, n - 1);
    const double sn2 = n >= 2 ? ipow(s, n - 2) : 0.0;
    const double d1 = e * (n * sn1 - 2.0 * p.sigma * s * a);
    const double d2 = e * (n * (n - 1) * sn2 - 2.0 * p.sigma * a - 4.0 * p.sigma * n * ipow(s, n) +
                           4.0 * p.sigma * p.sigma * s * s * a);
    return {e * a, d1, d2};
}

double flux_component(const SurfaceEnergy& energy, const ZetaParams& p, double x, double y, double t,
                      double delta, int component) {
    const ZetaJet z = zeta_jet(p, x, y, t);
    const GradientVec grad{z.dx, z.dy};
    const double q = std::sqrt(1.0 + z.dx * z.dx + z.dy * z.dy);
    const Hessian2 e = energy.hessian(grad);
    const double w = q * (e.e11 * z.dxx + (e.e12 + e.e21) * z.dxy + e.e22 * z.dyy);
    const double wx =
        (w_exact(energy, p, x + delta, y, t) - w_exact(energy, p, x - delta, y, t)) / (2.0 * delta);
    const double wy =
        (w_exact(energy, p, x, y + delta, t) - w_exact(energy, p, x, y - delta, t)) / (2.0 * delta);
    const GradientVec ew = e.apply({wx, wy});
    const double damp = 0.5 * w * w / (q * q * q);
    return component == 0 ? ew.p1 - damp * z.dx : ew.p2 - damp * z.dy;
}

}  // namespace

void ZetaParams::validate() const {
    if (!(r > 0.0) || !std::isfinite(r)) throw ContractError("ZetaParams: r must be positive");
    if (n <= 0 || n % 2 != 0) throw ContractError("ZetaParams: n must be a positive even integer");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ContractError("ZetaParams: sigma must be positive");
}

ZetaJet zeta_jet(const ZetaParams& p, double x, double y, double t) {
    const double scale = std::cos(std::numbers::pi * t) / ipow(p.r, 2 * p.n);
    const Factor a = factor(p, x);
    const Factor b = factor(p, y);
    return {scale * a.f * b.f, scale * a.d1 * b.f, scale * a.f * b.d1,
            scale * a.d2 * b.f, scale * a.d1 * b.d1, scale * a.f * b.d2};
}

double zeta(const ZetaParams& p, double x, double y, double t) {
    const double scale = std::cos(std::numbers::pi * t) / ipow(p.r, 2 * p.n);
    return scale * factor(p, x).f * factor(p, y).f;
}

double zeta_dt(const ZetaParams& p, double x, double y, double t) {
    const double scale = -std::numbers::pi * std::sin(std::numbers::pi * t) / ipow(p.r, 2 * p.n);
    return scale * factor(p, x).f * factor(p, y).f;
}

double w_exact(const SurfaceEnergy& energy, const ZetaParams& p, double x, double y, double t) {
    const ZetaJet z = zeta_jet(p, x, y, t);
    const double q = std::sqrt(1.0 + z.dx * z.dx + z.dy * z.dy);
    const Hessian2 e = energy.hessian({z.dx, z.dy});
    return q * (e.e11 * z.dxx + (e.e12 + e.e21) * z.dxy + e.e22 * z.dyy);
}

double forcing(const SurfaceEnergy& energy, const ZetaParams& p, double x, double y, double t, double delta) {
    if (!(delta > 0.0)) throw ContractError("forcing: delta must be positive");
    const double div = (flux_component(energy, p, x + delta, y, t, delta, 0) -
                        flux_component(energy, p, x - delta, y, t, delta, 0)) /
                           (2.0 * delta) +
                       (flux_component(energy, p, x, y + delta, t, delta, 1) -
                        flux_component(energy, p, x, y - delta, t, delta, 1)) /
                           (2.0 * delta);
    const ZetaJet z = zeta_jet(p, x, y, t);
    const double q = std::sqrt(1.0 + z.dx * z.dx + z.dy * z.dy);
    return q * div + zeta_dt(p, x, y, t);
}

double default_delta(const Grid& grid) { return std::min(grid.h1(), grid.h2()) / 100.0; }

SpaceTimeFunction make_forcing(const SurfaceEnergy& energy, const ZetaParams& p, double delta) {
    p.validate();
    return [energy, p, delta](double x, double y, double t) { return forcing(energy, p, x, y, t, delta); };
}

ForcingTable::ForcingTable(const Grid& grid, const SpaceTimeFunction& f, double t0, double t1, int points)
    : grid_(grid), t0_(t0), t1_(t1) {
    if (!(t1 > t0)) throw ContractError("ForcingTable: empty time window");
    if (points < 2) throw ContractError("ForcingTable: need at least 2 interpolation points");
    const auto k = static_cast<std::size_t>(points);
    nodes_.resize(k);
    weights_.resize(k);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    for (std::size_t m = 0; m < k; ++m) {
        nodes_[m] = mid - half * std::cos(std::numbers::pi * static_cast<double>(m) / static_cast<double>(k - 1));
        weights_[m] = (m % 2 == 0 ? 1.0 : -1.0) * ((m == 0 || m == k - 1) ? 0.5 : 1.0);
    }
    nodes_.front() = t0;
    nodes_.back() = t1;

    for (int j = 1; j < grid.n2(); ++j) {
        for (int i = 1; i < grid.n1(); ++i) interior_.push_back(grid.index(i, j));
    }
    values_.resize(interior_.size() * k);
    std::size_t n = 0;
    for (int j = 1; j < grid.n2(); ++j) {
        for (int i = 1; i < grid.n1(); ++i, ++n) {
            for (std::size_t m = 0; m < k; ++m) values_[n * k + m] = f(grid.x(i), grid.y(j), nodes_[m]);
        }
    }
}

void ForcingTable::fill(double t, std::span<double> out) const {
    const double slack = 1e-9 * (t1_ - t0_);
    if (t < t0_ - slack || t > t1_ + slack) {
        throw ContractError("ForcingTable: t = " + std::to_string(t) + " outside [" + std::to_string(t0_) + ", " +
                            std::to_string(t1_) + "]");
    }
    if (out.size() != grid_.node_count()) throw ContractError("ForcingTable: output size mismatch");
    const std::size_t k = nodes_.size();
    std::vector<double> c(k, 0.0);
    bool exact = false;
    for (std::size_t m = 0; m < k; ++m) {
        if (t == nodes_[m]) {
            std::fill(c.begin(), c.end(), 0.0);
            c[m] = 1.0;
            exact = true;
            break;
        }
        c[m] = weights_[m] / (t - nodes_[m]);
    }
    if (!exact) {
        double sum = 0.0;
        for (double v : c) sum += v;
        for (double& v : c) v /= sum;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t n = 0; n < interior_.size(); ++n) {
        const double* row = &values_[n * k];
        double acc = 0.0;
        for (std::size_t m = 0; m < k; ++m) acc += c[m] * row[m];
        out[interior_[n]] = acc;
    }
}

NodalForcing ForcingTable::as_nodal() const {
    return [table = *this](double t, std::span<double> out) { table.fill(t, out); };
}

SpaceTimeNorms spacetime_norms(std::span<const TimedField> snapshots, const SpaceTimeFunction& exact, double tau) {
    if (snapshots.empty()) throw ContractError("spacetime_norms: no snapshots");
    if (!(tau > 0.0)) throw ContractError("spacetime_norms: tau must be positive");
    const Grid& g = snapshots.front().field.grid();
    const double t0 = snapshots.front().t;
    SpaceTimeNorms out;
    double sq = 0.0;
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const TimedField& s = snapshots[k];
        if (!(s.field.grid() == g)) throw ContractError("spacetime_norms: snapshots on different grids");
        const double expected = t0 + static_cast<double>(k) * tau;
        if (std::abs(s.t - expected) > 1e-9 * std::max(tau, std::abs(expected))) {
            throw ContractError("spacetime_norms: snapshot " + std::to_string(k) + " at t = " + std::to_string(s.t) +
                                " breaks the uniform spacing tau = " + std::to_string(tau));
        }
        for (int j = 0; j <= g.n2(); ++j) {
            for (int i = 0; i <= g.n1(); ++i) {
                const double e = std::abs(s.field(i, j) - exact(g.x(i), g.y(j), s.t));
                out.l1 += e;
                sq += e * e;
                out.linf = std::max(out.linf, e);
            }
        }
    }
    const double weight = tau * g.h1() * g.h2();
    out.l1 *= weight;
    out.l2 = std::sqrt(sq * weight);
    return out;
}

SpaceTimeNorms spacetime_norms(std::span<const TimedField> snapshots, const ZetaParams& p, double tau) {
    return spacetime_norms(snapshots, [p](double x, double y, double t) { return zeta(p, x, y, t); }, tau);
}

double eoc(double err1, double err2, double h1, double h2) {
    if (!(err1 > 0.0) || !(err2 > 0.0)) throw ContractError("eoc: errors must be positive");
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw ContractError("eoc: mesh sizes must be positive");
    if (h1 == h2) throw ContractError("eoc: mesh sizes must differ");
    return std::log(err1 / err2) / std::log(h1 / h2);
}

std::vector<EocRow> eoc_table(std::span<const ErrorRecord> records) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<EocRow> rows;
    for (std::size_t k = 0; k < records.size(); ++k) {
        EocRow row{records[k], nan, nan, nan};
        if (k > 0 && !records[k].failed && !records[k - 1].failed) {
            const ErrorRecord& a = records[k - 1];
            const ErrorRecord& b = records[k];
            auto safe = [&](double e1, double e2) {
                return (e1 > 0.0 && e2 > 0.0 && a.h != b.h) ? eoc(e1, e2, a.h, b.h) : nan;
            };
            row.eoc_l1 = safe(a.err_l1, b.err_l1);
            row.eoc_l2 = safe(a.err_l2, b.err_l2);
            row.eoc_linf = safe(a.err_linf, b.err_linf);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace willmore::mms
