#include "willmore/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace willmore {

namespace {

constexpr double kMaxGrowth = 2.0;
constexpr double kMaxShrink = 0.1;

void check_finite(std::span<const double> k, double t, const char* stage) {
    for (double v : k) {
        if (!std::isfinite(v)) {
            throw DivergenceError(std::string("non-finite Merson stage ") + stage + " at t = " + std::to_string(t), t);
        }
    }
}

}  // namespace

bool StepperConfig::fixed_step() const noexcept { return std::isinf(tolerance) && tolerance > 0.0; }

void StepperConfig::validate() const {
    if (!(tolerance > 0.0)) throw ContractError("StepperConfig: tolerance must be positive");
    if (!(dt_min > 0.0) || !std::isfinite(dt_min)) throw ContractError("StepperConfig: dt_min must be positive");
    if (!(dt_max >= dt_min) || !std::isfinite(dt_max)) throw ContractError("StepperConfig: dt_max must be >= dt_min");
    if (!(dt_init >= dt_min && dt_init <= dt_max)) {
        throw ContractError("StepperConfig: dt_init must lie in [dt_min, dt_max]");
    }
    if (!(safety > 0.0 && safety <= 1.0)) throw ContractError("StepperConfig: safety must lie in (0, 1]");
}

void MersonStepper::resize(std::size_t n) {
    if (k1_.size() == n) return;
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &stage_}) v->assign(n, 0.0);
}

StepOutcome MersonStepper::step(const OdeRhs& f, double t, double dt, std::span<const double> u,
                                std::span<double> u_next, const StepperConfig& cfg) {
    if (!(dt > 0.0)) throw ContractError("rkm_step: dt must be positive");
    if (u_next.size() != u.size()) throw ContractError("rkm_step: output size mismatch");
    const std::size_t n = u.size();
    resize(n);

    f(t, u, k1_);
    check_finite(k1_, t, "k1");
    for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + dt * k1_[i] / 3.0;
    f(t + dt / 3.0, stage_, k2_);
    check_finite(k2_, t, "k2");
    for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + dt * (k1_[i] + k2_[i]) / 6.0;
    f(t + dt / 3.0, stage_, k3_);
    check_finite(k3_, t, "k3");
    for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + dt * (k1_[i] + 3.0 * k3_[i]) / 8.0;
    f(t + 0.5 * dt, stage_, k4_);
    check_finite(k4_, t, "k4");
    for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + 0.5 * dt * (k1_[i] - 3.0 * k3_[i] + 4.0 * k4_[i]);
    f(t + dt, stage_, k5_);
    check_finite(k5_, t, "k5");

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u_next[i] = u[i] + dt * (k1_[i] + 4.0 * k4_[i] + k5_[i]) / 6.0;
        err = std::max(err, std::abs(dt * (2.0 * k1_[i] - 9.0 * k3_[i] + 8.0 * k4_[i] - k5_[i]) / 30.0));
    }

    StepOutcome out;
    out.dt_used = dt;
    out.error_estimate = err;
    if (cfg.fixed_step()) {
        out.accepted = true;
        out.dt_next = dt;
        return out;
    }
    out.accepted = err <= cfg.tolerance;
    if (err == 0.0) {
        out.dt_next = std::min(kMaxGrowth * dt, cfg.dt_max);
    } else {
        const double factor =
            std::clamp(cfg.safety * std::pow(cfg.tolerance / err, 0.2), kMaxShrink, kMaxGrowth);
        out.dt_next = std::clamp(factor * dt, cfg.dt_min, cfg.dt_max);
    }
    if (!out.accepted && dt <= cfg.dt_min) {
        throw StepFailure("step rejected at dt_min = " + std::to_string(cfg.dt_min) + " (error estimate " +
                              std::to_string(err) + ") at t = " + std::to_string(t),
                          t);
    }
    return out;
}

std::pair<std::vector<double>, StepOutcome> rkm_step(const OdeRhs& f, std::span<const double> u, double t,
                                                     double dt, const StepperConfig& cfg) {
    MersonStepper stepper;
    std::vector<double> next(u.size());
    const StepOutcome outcome = stepper.step(f, t, dt, u, next, cfg);
    return {std::move(next), outcome};
}

IntegrationResult integrate(const OdeRhs& f, std::vector<double> u0, double t0, double t_end,
                            const StepperConfig& cfg, std::vector<double> snapshot_times,
                            const StepObserver& observer) {
    cfg.validate();
    if (!(t_end >= t0)) throw ContractError("integrate: t_end must not precede t0");
    std::sort(snapshot_times.begin(), snapshot_times.end());
    snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()), snapshot_times.end());
    if (!snapshot_times.empty() && (snapshot_times.front() < t0 || snapshot_times.back() > t_end)) {
        throw ContractError("integrate: snapshot times must lie in [t0, t_end]");
    }

    IntegrationResult result;
    std::vector<double> u = std::move(u0);
    std::vector<double> next(u.size());
    MersonStepper stepper;

    std::size_t next_snap = 0;
    auto record_due = [&](double t) {
        while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= t) {
            result.snapshots.push_back({snapshot_times[next_snap], u});
            ++next_snap;
        }
    };

    double t = t0;
    double dt = cfg.dt_init;
    record_due(t);
    try {
        while (t < t_end) {
            const double target = next_snap < snapshot_times.size() ? snapshot_times[next_snap] : t_end;
            const double remaining = target - t;
            // Land on the target rather than leave a sliver behind.
            const bool landing = remaining <= dt * (1.0 + 1e-9);
            const double h = landing ? remaining : dt;

            const StepOutcome outcome = stepper.step(f, t, h, u, next, cfg);
            if (!outcome.accepted) {
                ++result.rejected_steps;
                dt = outcome.dt_next;
                continue;
            }
            ++result.accepted_steps;
            result.dt_sum += h;
            t = landing ? target : t + h;
            u.swap(next);
            // A step shortened to land says nothing about a full-size step.
            if (!(landing && h < dt)) dt = outcome.dt_next;
            if (observer) observer(t, u, outcome);
            record_due(t);
        }
    } catch (const DivergenceError& e) {
        throw IntegrationAborted(e.what(), IntegrationAborted::Cause::Divergence, t, std::move(u),
                                 std::move(result.snapshots));
    } catch (const StepFailure& e) {
        throw IntegrationAborted(e.what(), IntegrationAborted::Cause::StepFailure, t, std::move(u),
                                 std::move(result.snapshots));
    }
    result.t_final = t;
    result.state = std::move(u);
    return result;
}

}  // namespace willmore
