#pragma once

#include <cstdint>

#include "roughmc/environment.hpp"
#include "roughmc/rng.hpp"
#include "roughmc/subsolution.hpp"

namespace roughmc {

enum class DtRule { ScaledTol, Fixed };

struct StepRule {
    DtRule kind = DtRule::ScaledTol;
    double value = 1e-3;  // tolerance for ScaledTol, dt for Fixed

    bool operator==(const StepRule&) const = default;
};

enum class SimMode { FiniteHorizon, ExitFromInterval };

struct SimParams {
    double epsilon = 0.1;
    double delta = 0.01;
    double t0 = 0.0;
    double T = 1.0;  // finite-horizon mode
    double x0 = 0.0;
    StepRule dt_rule;
    SimMode mode = SimMode::FiniteHorizon;
    double x_minus = 0.0;  // exit mode
    double x_plus = 0.0;
    std::uint64_t max_steps = 100'000'000;  // exit-mode step budget per path
};

enum class ControlVariant { NoControl, FullMultiscale, HomogenizedOnly };

struct ControlScheme {
    ControlVariant variant = ControlVariant::NoControl;
    const Subsolution* subsolution = nullptr;  // unused under NoControl
};

struct TrajectoryOutcome {
    double terminal_x = 0.0;
    bool exited_at_plus = false;
    double log_weight = 0.0;  // log dP/dPbar along the path
    std::uint64_t n_steps = 0;
    bool valid = true;     // false when the state overflowed
    bool censored = false;  // exit-mode step budget exhausted
};

// Delta = tol * delta^2 / epsilon (clamping to the horizon happens where the
// horizon is known; see resolve_step).
double step_size(double epsilon, double delta, double tol);

struct ResolvedStep {
    double dt = 0.0;
    bool clamped = false;  // scaled step exceeded the horizon
};

ResolvedStep resolve_step(const SimParams& params);

// Feedback control applied through the noise channel:
//   NoControl:        0
//   FullMultiscale:   -sigma (corrector_scale e^{Q(y)/D}) Ubar_x(t, x)
//   HomogenizedOnly:  -sqrt(q) Ubar_x(t, x)
double control_value(const Environment& env, const ControlScheme& control, double t, double x,
                     double y);

// Predictor-corrector Euler step of the controlled multiscale SDE
//   dX = [(eps/delta) b + c](X, X/delta) ds + sigma [sqrt(eps) dWbar + u ds],
// with b = -Q', c = -V', sigma = sqrt(2D), accumulating
//   log dP/dPbar += -(1/2eps) u^2 dt - (1/sqrt(eps)) u dWbar
// with u frozen at the step start. Exit mode stops at the first grid point
// outside (x_minus, x_plus), checking x_plus first.
TrajectoryOutcome simulate_path(const Environment& env, const SimParams& params,
                                const ControlScheme& control, RngStream& rng);

}  // namespace roughmc
