#include "willmore/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace willmore {

double Hessian2::min_eigenvalue() const noexcept {
    const double mean = 0.5 * (e11 + e22);
    const double off = 0.5 * (e12 + e21);
    const double half_diff = 0.5 * (e11 - e22);
    return mean - std::hypot(half_diff, off);
}

SurfaceEnergy SurfaceEnergy::isotropic() { return SurfaceEnergy(Kind::Isotropic, 1.0, 0.0, 1.0, 0.0); }

SurfaceEnergy SurfaceEnergy::quadratic_form(double g11, double g12, double g22) {
    if (!std::isfinite(g11) || !std::isfinite(g12) || !std::isfinite(g22)) {
        throw ContractError("quadratic_form: G entries must be finite");
    }
    // Sylvester: both leading minors positive.
    if (!(g11 > 0.0) || !(g11 * g22 - g12 * g12 > 0.0)) {
        throw ContractError("quadratic_form: G = [[" + std::to_string(g11) + ", " + std::to_string(g12) + "], [" +
                            std::to_string(g12) + ", " + std::to_string(g22) + "]] is not positive definite");
    }
    return SurfaceEnergy(Kind::QuadraticForm, g11, g12, g22, 0.0);
}

SurfaceEnergy SurfaceEnergy::regularized_abs(double eps_abs) {
    if (!(eps_abs > 0.0) || !std::isfinite(eps_abs)) {
        throw ContractError("regularized_abs: eps_abs must be positive, got " + std::to_string(eps_abs));
    }
    return SurfaceEnergy(Kind::RegularizedAbs, 1.0, 0.0, 1.0, eps_abs);
}

double SurfaceEnergy::gamma(const GradientVec& p) const noexcept {
    switch (kind_) {
        case Kind::Isotropic:
            return std::sqrt(1.0 + p.p1 * p.p1 + p.p2 * p.p2);
        case Kind::QuadraticForm:
            return std::sqrt(1.0 + g11_ * p.p1 * p.p1 + 2.0 * g12_ * p.p1 * p.p2 + g22_ * p.p2 * p.p2);
        case Kind::RegularizedAbs: {
            const double reg = eps_ * (p.p1 * p.p1 + p.p2 * p.p2 + 1.0);
            return std::sqrt(p.p1 * p.p1 + reg) + std::sqrt(p.p2 * p.p2 + reg) + std::sqrt(1.0 + reg);
        }
    }
    return 0.0;
}

GradientVec SurfaceEnergy::grad_p(const GradientVec& p) const noexcept {
    switch (kind_) {
        case Kind::Isotropic: {
            const double q = std::sqrt(1.0 + p.p1 * p.p1 + p.p2 * p.p2);
            return {p.p1 / q, p.p2 / q};
        }
        case Kind::QuadraticForm: {
            const double gp1 = g11_ * p.p1 + g12_ * p.p2;
            const double gp2 = g12_ * p.p1 + g22_ * p.p2;
            const double g = std::sqrt(1.0 + p.p1 * gp1 + p.p2 * gp2);
            return {gp1 / g, gp2 / g};
        }
        case Kind::RegularizedAbs: {
            const double reg = eps_ * (p.p1 * p.p1 + p.p2 * p.p2 + 1.0);
            const double r1 = std::sqrt(p.p1 * p.p1 + reg);
            const double r2 = std::sqrt(p.p2 * p.p2 + reg);
            const double r3 = std::sqrt(1.0 + reg);
            const double inv_sum = 1.0 / r1 + 1.0 / r2 + 1.0 / r3;
            return {eps_ * p.p1 * inv_sum + p.p1 / r1, eps_ * p.p2 * inv_sum + p.p2 / r2};
        }
    }
    return {};
}

Hessian2 SurfaceEnergy::hessian(const GradientVec& p) const noexcept {
    switch (kind_) {
        case Kind::Isotropic: {
            const double q2 = 1.0 + p.p1 * p.p1 + p.p2 * p.p2;
            const double q = std::sqrt(q2);
            const double inv_q3 = 1.0 / (q * q2);
            const double off = -p.p1 * p.p2 * inv_q3;
            // (1/Q)(I - p p^T / Q^2), with the diagonal written as (Q^2 - p_i^2) / Q^3
            return {(1.0 + p.p2 * p.p2) * inv_q3, off, off, (1.0 + p.p1 * p.p1) * inv_q3};
        }
        case Kind::QuadraticForm: {
            const double gp1 = g11_ * p.p1 + g12_ * p.p2;
            const double gp2 = g12_ * p.p1 + g22_ * p.p2;
            const double g2 = 1.0 + p.p1 * gp1 + p.p2 * gp2;
            const double g = std::sqrt(g2);
            const double inv_g = 1.0 / g;
            const double inv_g3 = inv_g / g2;
            const double off = g12_ * inv_g - gp1 * gp2 * inv_g3;
            return {g11_ * inv_g - gp1 * gp1 * inv_g3, off, off, g22_ * inv_g - gp2 * gp2 * inv_g3};
        }
        case Kind::RegularizedAbs: {
            // r_i = sqrt(P_i^2 + eps |P|^2). Differentiating
            //   gamma_{p_a} = eps p_a sum_i 1/r_i + p_a / r_a
            // once more gives, with c_i = 1/r_i^3,
            //   gamma_{p_a p_b} = delta_ab (eps sum_i 1/r_i + 1/r_a)
            //                   - eps^2 p_a p_b sum_i c_i - eps p_a p_b (c_a + c_b)
            //                   - delta_ab p_a^2 c_a.
            const double reg = eps_ * (p.p1 * p.p1 + p.p2 * p.p2 + 1.0);
            const double r1 = std::sqrt(p.p1 * p.p1 + reg);
            const double r2 = std::sqrt(p.p2 * p.p2 + reg);
            const double r3 = std::sqrt(1.0 + reg);
            const double c1 = 1.0 / (r1 * r1 * r1);
            const double c2 = 1.0 / (r2 * r2 * r2);
            const double c3 = 1.0 / (r3 * r3 * r3);
            const double inv_sum = 1.0 / r1 + 1.0 / r2 + 1.0 / r3;
            const double c_sum = c1 + c2 + c3;
            const double e2 = eps_ * eps_;
            const double e11 = eps_ * inv_sum + 1.0 / r1 - e2 * p.p1 * p.p1 * c_sum -
                               2.0 * eps_ * p.p1 * p.p1 * c1 - p.p1 * p.p1 * c1;
            const double e22 = eps_ * inv_sum + 1.0 / r2 - e2 * p.p2 * p.p2 * c_sum -
                               2.0 * eps_ * p.p2 * p.p2 * c2 - p.p2 * p.p2 * c2;
            const double e12 = -e2 * p.p1 * p.p2 * c_sum - eps_ * p.p1 * p.p2 * (c1 + c2);
            return {e11, e12, e12, e22};
        }
    }
    return {};
}

double SurfaceEnergy::gamma_full(const std::array<double, 3>& P) const noexcept {
    switch (kind_) {
        case Kind::Isotropic:
            return std::sqrt(P[0] * P[0] + P[1] * P[1] + P[2] * P[2]);
        case Kind::QuadraticForm:
            return std::sqrt(P[2] * P[2] + g11_ * P[0] * P[0] + 2.0 * g12_ * P[0] * P[1] + g22_ * P[1] * P[1]);
        case Kind::RegularizedAbs: {
            const double reg = eps_ * (P[0] * P[0] + P[1] * P[1] + P[2] * P[2]);
            return std::sqrt(P[0] * P[0] + reg) + std::sqrt(P[1] * P[1] + reg) + std::sqrt(P[2] * P[2] + reg);
        }
    }
    return 0.0;
}

std::vector<WulffPoint> wulff_boundary(const SurfaceEnergy& se, int n_samples, double q3) {
    if (n_samples < 8) {
        throw ContractError("wulff_boundary: n_samples must be at least 8, got " + std::to_string(n_samples));
    }
    const auto n = static_cast<std::size_t>(n_samples);
    std::vector<double> theta(n), c(n), s(n), support(n);
    for (std::size_t k = 0; k < n; ++k) {
        theta[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        c[k] = std::cos(theta[k]);
        s[k] = std::sin(theta[k]);
        support[k] = se.gamma_full({c[k], s[k], q3});
    }

    // Line k: x = support_k q_k + t (-s_k, c_k). Clip t against every other half-plane.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> t_lo(n, -inf), t_hi(n, inf);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
            if (m == k) continue;
            const double coef = -s[k] * c[m] + c[k] * s[m];
            const double rhs = support[m] - support[k] * (c[k] * c[m] + s[k] * s[m]);
            if (std::abs(coef) < 1e-14) {
                if (rhs < 0.0) t_lo[k] = inf;
                continue;
            }
            const double bound = rhs / coef;
            if (coef > 0.0) {
                t_hi[k] = std::min(t_hi[k], bound);
            } else {
                t_lo[k] = std::max(t_lo[k], bound);
            }
        }
    }

    std::vector<WulffPoint> out(n);
    std::vector<std::array<double, 2>> vertices;
    std::vector<bool> active(n);
    for (std::size_t k = 0; k < n; ++k) {
        active[k] = t_lo[k] <= t_hi[k];
        if (!active[k]) continue;
        const double t = std::isfinite(t_lo[k]) && std::isfinite(t_hi[k]) ? 0.5 * (t_lo[k] + t_hi[k])
                                                                            : std::clamp(0.0, t_lo[k], t_hi[k]);
        out[k] = {theta[k], support[k] * c[k] - t * s[k], support[k] * s[k] + t * c[k]};
        for (double te : {t_lo[k], t_hi[k]}) {
            vertices.push_back({support[k] * c[k] - te * s[k], support[k] * s[k] + te * c[k]});
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (active[k]) continue;
        double best = -inf;
        for (const auto& v : vertices) {
            const double d = v[0] * c[k] + v[1] * s[k];
            if (d > best) {
                best = d;
                out[k] = {theta[k], v[0], v[1]};
            }
        }
    }
    return out;
}

}  // namespace willmore
