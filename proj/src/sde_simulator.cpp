#include "roughmc/sde_simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace roughmc {

double step_size(double epsilon, double delta, double tol) {
    if (!(tol > 0.0) || !(epsilon > 0.0) || !(delta > 0.0)) {
        throw std::invalid_argument("step_size: epsilon, delta, tol must be positive");
    }
    return tol * delta * delta / epsilon;
}

ResolvedStep resolve_step(const SimParams& params) {
    ResolvedStep out;
    if (params.dt_rule.kind == DtRule::Fixed) {
        out.dt = params.dt_rule.value;
        if (!(out.dt > 0.0)) {
            throw std::invalid_argument("resolve_step: fixed dt must be positive");
        }
        return out;
    }
    out.dt = step_size(params.epsilon, params.delta, params.dt_rule.value);
    if (params.mode == SimMode::FiniteHorizon && out.dt > params.T - params.t0) {
        out.dt = params.T - params.t0;
        out.clamped = true;
    }
    return out;
}

double control_value(const Environment& env, const ControlScheme& control, double t, double x,
                     double y) {
    switch (control.variant) {
        case ControlVariant::NoControl:
            return 0.0;
        case ControlVariant::FullMultiscale:
            return -env.sigma() * env.corrector(y) * value_and_gradient(*control.subsolution, t, x).gradient;
        case ControlVariant::HomogenizedOnly:
            return -std::sqrt(env.q()) * value_and_gradient(*control.subsolution, t, x).gradient;
    }
    return 0.0;
}

TrajectoryOutcome simulate_path(const Environment& env, const SimParams& params,
                                const ControlScheme& control, RngStream& rng) {
    if (control.variant != ControlVariant::NoControl && control.subsolution == nullptr) {
        throw std::invalid_argument("simulate_path: control scheme lacks a subsolution");
    }
    const double eps = params.epsilon;
    const double ratio = eps / params.delta;
    const double inv_delta = 1.0 / params.delta;
    const double sig = env.sigma();
    const double noise_scale = std::sqrt(eps) * sig;
    const double inv_sqrt_eps = 1.0 / std::sqrt(eps);
    const double dt = resolve_step(params).dt;
    const bool no_control = control.variant == ControlVariant::NoControl;

    TrajectoryOutcome out;
    double x = params.x0;
    double log_weight = 0.0;

    const auto drift = [&](double t, double xx, double* u_out) {
        const double y = xx * inv_delta;
        const double u = no_control ? 0.0 : control_value(env, control, t, xx, y);
        if (u_out != nullptr) {
            *u_out = u;
        }
        return -ratio * env.Qprime(y) - env.Vprime(xx) + sig * u;
    };

    const auto step = [&](double t, double h) {
        const double dw = std::sqrt(h) * rng.next_normal();
        double u0 = 0.0;
        const double f0 = drift(t, x, &u0);
        const double x_pred = x + f0 * h + noise_scale * dw;
        const double f1 = drift(t + h, x_pred, nullptr);
        x += 0.5 * (f0 + f1) * h + noise_scale * dw;
        if (!no_control) {
            log_weight += -(0.5 / eps) * u0 * u0 * h - inv_sqrt_eps * u0 * dw;
        }
    };

    if (params.mode == SimMode::FiniteHorizon) {
        const double horizon = params.T - params.t0;
        const std::uint64_t n_steps = std::uint64_t(std::ceil(horizon / dt - 1e-9));
        for (std::uint64_t k = 0; k < n_steps; ++k) {
            const double t = params.t0 + double(k) * dt;
            const double h = (k + 1 == n_steps) ? (params.T - t) : dt;
            step(t, h);
            ++out.n_steps;
            if (!std::isfinite(x)) {
                out.valid = false;
                break;
            }
        }
    } else {
        while (true) {
            if (out.n_steps >= params.max_steps) {
                out.censored = true;
                break;
            }
            const double t = params.t0 + double(out.n_steps) * dt;
            step(t, dt);
            ++out.n_steps;
            if (!std::isfinite(x)) {
                out.valid = false;
                break;
            }
            if (x >= params.x_plus) {
                out.exited_at_plus = true;
                break;
            }
            if (x <= params.x_minus) {
                out.exited_at_plus = false;
                break;
            }
        }
    }

    out.terminal_x = x;
    out.log_weight = log_weight;
    return out;
}

}  // namespace roughmc
