#include "roughmc/subsolution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace roughmc {

double hamiltonian(const Hamiltonian1D& ham, double x, double p) {
    return ham.r(x) * p - 0.5 * ham.q * p * p;
}

namespace {

// sign(0) = +1 by convention; G is continuous across 0 but its gradient is not.
double sign_plus(double x) { return x >= 0.0 ? 1.0 : -1.0; }

ValueGradient eval_terminal(const TerminalQuadraticSubsolution& g, double t, double x) {
    // With s = e^{kappa (t - T)} <= 1 the closed form reduces to
    //   G = (1 - |x| s)^2 / ((1+2D) - 2D s^2),
    // which needs a single exponential and no large intermediates.
    const double s = std::exp(g.kappa * (t - g.T));
    const double num = 1.0 - std::abs(x) * s;
    const double den = (1.0 + 2.0 * g.D) - 2.0 * g.D * s * s;
    ValueGradient out;
    out.value = num * num / den;
    out.gradient = -2.0 * s * num * sign_plus(x) / den;
    return out;
}

ValueGradient eval_exit(const ExitSubsolution& e, double x) {
    ValueGradient out;
    switch (e.shape) {
        case ExitShape::LinearDrift:
            out.value = (e.x_plus - x) / e.D;
            out.gradient = -1.0 / e.D;
            break;
        case ExitShape::RestPoint:
            out.value = (e.x_plus * e.x_plus - x * x) / (2.0 * e.D);
            out.gradient = -x / e.D;
            break;
    }
    return out;
}

}  // namespace

ValueGradient value_and_gradient(const Subsolution& sub, double t, double x) {
    return std::visit(
        [&](const auto& s) -> ValueGradient {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ZeroSubsolution>) {
                return ValueGradient{0.0, 0.0};
            } else if constexpr (std::is_same_v<S, TerminalQuadraticSubsolution>) {
                return eval_terminal(s, t, x);
            } else {
                return eval_exit(s, x);
            }
        },
        sub);
}

double terminal_data(const Subsolution& sub, double x) {
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ExitSubsolution>) {
                // Boundary data: 0 at the target boundary, +inf elsewhere.
                return x >= s.x_plus ? 0.0 : std::numeric_limits<double>::infinity();
            } else {
                const double a = std::abs(x) - 1.0;
                return a * a;
            }
        },
        sub);
}

bool is_stationary(const Subsolution& sub) {
    return !std::holds_alternative<TerminalQuadraticSubsolution>(sub);
}

namespace {

// Second-order finite difference in t: centered inside, 3-point one-sided at
// the ends of the time grid.
double time_derivative(const Subsolution& sub, double t, double x, double h, double t_lo, double t_hi) {
    const auto val = [&](double tt) { return value_and_gradient(sub, tt, x).value; };
    if (t - h < t_lo) {
        return (-3.0 * val(t) + 4.0 * val(t + h) - val(t + 2.0 * h)) / (2.0 * h);
    }
    if (t + h > t_hi) {
        return (3.0 * val(t) - 4.0 * val(t - h) + val(t - 2.0 * h)) / (2.0 * h);
    }
    return (val(t + h) - val(t - h)) / (2.0 * h);
}

}  // namespace

VerifyReport verify_subsolution(const Subsolution& sub, const Hamiltonian1D& ham,
                                const VerifyGrid& grid, double tol) {
    if (grid.nx < 2 || !(grid.x_hi > grid.x_lo)) {
        throw std::invalid_argument("verify_subsolution: bad x grid");
    }
    const bool terminal_type = std::holds_alternative<TerminalQuadraticSubsolution>(sub);
    if (terminal_type && grid.x_lo <= 0.0 && grid.x_hi >= 0.0) {
        throw std::invalid_argument(
            "verify_subsolution: grid touches x=0 where the terminal subsolution is not smooth");
    }
    const bool stationary = is_stationary(sub);
    if (!stationary && (grid.nt < 2 || !(grid.t_hi > grid.t_lo))) {
        throw std::invalid_argument("verify_subsolution: bad t grid");
    }

    VerifyReport report;
    report.tol = tol;
    report.max_violation = -std::numeric_limits<double>::infinity();
    report.terminal_gap = -std::numeric_limits<double>::infinity();

    const int nt = stationary ? 1 : grid.nt;
    const double dx = (grid.x_hi - grid.x_lo) / (grid.nx - 1);
    const double dt = stationary ? 0.0 : (grid.t_hi - grid.t_lo) / (grid.nt - 1);

    for (int it = 0; it < nt; ++it) {
        const double t = grid.t_lo + it * dt;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_lo + ix * dx;
            if (terminal_type && x == 0.0) {
                throw std::invalid_argument("verify_subsolution: grid node at x=0");
            }
            const ValueGradient vg = value_and_gradient(sub, t, x);
            const double ut =
                stationary ? 0.0 : time_derivative(sub, t, x, grid.fd_step, grid.t_lo, grid.t_hi);
            const double residual = ut + hamiltonian(ham, x, vg.gradient);
            if (-residual > report.max_violation) {
                report.max_violation = -residual;
                report.violation_t = t;
                report.violation_x = x;
            }
        }
    }

    // Terminal (or target-boundary) inequality Ubar <= h.
    if (const auto* exit = std::get_if<ExitSubsolution>(&sub)) {
        report.terminal_gap = value_and_gradient(sub, 0.0, exit->x_plus).value;
        report.terminal_gap_x = exit->x_plus;
    } else {
        const double T = terminal_type ? std::get<TerminalQuadraticSubsolution>(sub).T : grid.t_hi;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_lo + ix * dx;
            const double gap = value_and_gradient(sub, T, x).value - terminal_data(sub, x);
            if (gap > report.terminal_gap) {
                report.terminal_gap = gap;
                report.terminal_gap_x = x;
            }
        }
    }

    report.passed = report.max_violation <= tol && report.terminal_gap <= tol;
    return report;
}

}  // namespace roughmc
