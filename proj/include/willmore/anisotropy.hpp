#pragma once

#include <array>
#include <vector>

#include "willmore/grid.hpp"

namespace willmore {

/// Second partials of gamma in (p1, p2).
struct Hessian2 {
    double e11 = 0.0;
    double e12 = 0.0;
    double e21 = 0.0;
    double e22 = 0.0;

    double min_eigenvalue() const noexcept;
    GradientVec apply(const GradientVec& v) const noexcept {
        return {e11 * v.p1 + e12 * v.p2, e21 * v.p1 + e22 * v.p2};
    }
};

/// Surface energy density gamma(p1, p2, -1).
///
/// Three families are supported:
///  - Isotropic:      sqrt(1 + |p|^2)
///  - QuadraticForm:  sqrt(1 + p^T G p), G symmetric positive definite
///  - RegularizedAbs: sum_i sqrt(P_i^2 + eps |P|^2), P = (p1, p2, -1)
class SurfaceEnergy {
public:
    enum class Kind { Isotropic, QuadraticForm, RegularizedAbs };

    static SurfaceEnergy isotropic();
    /// Throws ContractError unless G = [[g11, g12], [g12, g22]] is positive definite.
    static SurfaceEnergy quadratic_form(double g11, double g12, double g22);
    /// Throws ContractError unless eps_abs > 0.
    static SurfaceEnergy regularized_abs(double eps_abs);

    Kind kind() const noexcept { return kind_; }
    double g11() const noexcept { return g11_; }
    double g12() const noexcept { return g12_; }
    double g22() const noexcept { return g22_; }
    double eps_abs() const noexcept { return eps_; }

    double gamma(const GradientVec& p) const noexcept;
    GradientVec grad_p(const GradientVec& p) const noexcept;
    Hessian2 hessian(const GradientVec& p) const noexcept;

    /// gamma as a 1-homogeneous function of the full 3-vector P.
    double gamma_full(const std::array<double, 3>& P) const noexcept;

private:
    SurfaceEnergy(Kind kind, double g11, double g12, double g22, double eps)
        : kind_(kind), g11_(g11), g12_(g12), g22_(g22), eps_(eps) {}

    Kind kind_;
    double g11_;
    double g12_;
    double g22_;
    double eps_;
};

inline double gamma(const SurfaceEnergy& se, const GradientVec& p) { return se.gamma(p); }
inline GradientVec grad_p(const SurfaceEnergy& se, const GradientVec& p) { return se.grad_p(p); }
inline Hessian2 hessian(const SurfaceEnergy& se, const GradientVec& p) { return se.hessian(p); }

struct WulffPoint {
    double theta;
    double x;
    double y;
};

/// Planar slice of the Wulff shape, as the intersection of the half-planes
/// {x : x . q(theta_k) <= gamma_full(cos theta_k, sin theta_k, q3)} for
/// theta_k = 2 pi k / n_samples. Returns, for each k, the midpoint of the
/// polygon edge lying on line k (the extreme vertex in direction theta_k
/// when line k does not touch the polygon).
std::vector<WulffPoint> wulff_boundary(const SurfaceEnergy& se, int n_samples, double q3 = 0.0);

}  // namespace willmore
