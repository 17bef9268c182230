#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "willmore/error.hpp"

namespace willmore {

/// du/dt = f(t, u), written into dudt.
using OdeRhs = std::function<void(double t, std::span<const double> u, std::span<double> dudt)>;

struct StepperConfig {
    double tolerance = 1e-6;  // max-norm local error target; +inf selects fixed-step mode
    double dt_init = 1e-6;
    double dt_min = 1e-16;
    double dt_max = 1.0;
    double safety = 0.8;

    bool fixed_step() const noexcept;
    /// Throws ContractError naming the violated invariant.
    void validate() const;
};

struct StepOutcome {
    bool accepted = false;
    double dt_used = 0.0;
    double dt_next = 0.0;
    double error_estimate = 0.0;
};

/// Runge-Kutta-Merson 4(5) pair with reusable stage buffers.
///
///   k1 = f(t, u)
///   k2 = f(t + dt/3, u + dt k1/3)
///   k3 = f(t + dt/3, u + dt (k1 + k2)/6)
///   k4 = f(t + dt/2, u + dt (k1 + 3 k3)/8)
///   k5 = f(t + dt,   u + dt (k1 - 3 k3 + 4 k4)/2)
///   u' = u + dt (k1 + 4 k4 + k5)/6
///   err = max |dt (2 k1 - 9 k3 + 8 k4 - k5)/30|
class MersonStepper {
public:
    /// Attempts one step of size dt from (t, u). On acceptance u_next holds
    /// the new state; otherwise its contents are unspecified.
    ///
    /// Throws DivergenceError if a stage is non-finite and StepFailure if the
    /// step is rejected at dt <= dt_min.
    StepOutcome step(const OdeRhs& f, double t, double dt, std::span<const double> u, std::span<double> u_next,
                     const StepperConfig& cfg);

private:
    void resize(std::size_t n);

    std::vector<double> k1_, k2_, k3_, k4_, k5_, stage_;
};

/// Single Merson step returning the candidate state and the controller outcome.
std::pair<std::vector<double>, StepOutcome> rkm_step(const OdeRhs& f, std::span<const double> u, double t,
                                                     double dt, const StepperConfig& cfg);

struct StateSnapshot {
    double t;
    std::vector<double> u;
};

struct IntegrationResult {
    double t_final = 0.0;
    std::vector<double> state;
    std::vector<StateSnapshot> snapshots;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double dt_sum = 0.0;
};

/// Called after every accepted step with the new time and state.
using StepObserver = std::function<void(double t, std::span<const double> u, const StepOutcome& outcome)>;

/// Integration stopped by divergence or step failure. Carries the last
/// accepted state and the snapshots recorded before the failure.
class IntegrationAborted : public Error {
public:
    enum class Cause { Divergence, StepFailure };

    IntegrationAborted(const std::string& what, Cause cause, double t, std::vector<double> last_state,
                       std::vector<StateSnapshot> snapshots)
        : Error(what), cause_(cause), t_(t), last_state_(std::move(last_state)), snapshots_(std::move(snapshots)) {}

    Cause cause() const noexcept { return cause_; }
    double t() const noexcept { return t_; }
    const std::vector<double>& last_state() const noexcept { return last_state_; }
    const std::vector<StateSnapshot>& snapshots() const noexcept { return snapshots_; }

private:
    Cause cause_;
    double t_;
    std::vector<double> last_state_;
    std::vector<StateSnapshot> snapshots_;
};

/// Advances u0 from t0 to t_end, shortening steps to land exactly on every
/// requested snapshot time and on t_end. Snapshot times are deduplicated and
/// must lie in [t0, t_end].
IntegrationResult integrate(const OdeRhs& f, std::vector<double> u0, double t0, double t_end,
                            const StepperConfig& cfg, std::vector<double> snapshot_times = {},
                            const StepObserver& observer = {});

}  // namespace willmore
