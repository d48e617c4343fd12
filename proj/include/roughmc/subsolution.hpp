#pragma once

#include <functional>
#include <variant>

namespace roughmc {

// Hamiltonian of the homogenized HJB:  Hbar(x, p) = r(x) p - q p^2 / 2.
struct Hamiltonian1D {
    std::function<double(double)> r;
    double q = 0.0;
};

double hamiltonian(const Hamiltonian1D& ham, double x, double p);

struct ValueGradient {
    double value = 0.0;
    double gradient = 0.0;
};

// Ubar = 0: no change of measure (standard Monte Carlo).
struct ZeroSubsolution {};

// Closed-form solution of the finite-horizon HJB with terminal cost
// h(x) = (|x| - 1)^2 for the linear effective drift r(x) = -kappa x:
//   G(t,x) = (e^{kT} - |x| e^{kt})^2 / ((1+2D) e^{2kT} - 2D e^{2kt}),
// smooth except at x = 0, where sign(0) = +1 is used.
struct TerminalQuadraticSubsolution {
    double kappa = 0.0;
    double D = 1.0;
    double T = 1.0;
};

enum class ExitShape {
    LinearDrift,  // U(x) = (x_plus - x) / D
    RestPoint,    // U(x) = (x_plus^2 - x^2) / (2D)  (quasipotential form)
};

// Stationary subsolutions for exit through x_plus of (x_minus, x_plus).
struct ExitSubsolution {
    double D = 1.0;
    double x_plus = 0.0;
    double x_minus = 0.0;
    ExitShape shape = ExitShape::LinearDrift;
};

using Subsolution = std::variant<ZeroSubsolution, TerminalQuadraticSubsolution, ExitSubsolution>;

// (Ubar, dUbar/dx) at (t, x); exit subsolutions ignore t.
ValueGradient value_and_gradient(const Subsolution& sub, double t, double x);

// Terminal / boundary data the subsolution is checked against:
//   terminal type: h(x) = (|x| - 1)^2;  exit types: 0 at x_plus.
double terminal_data(const Subsolution& sub, double x);

// Whether the subsolution depends on time (false for exit types and zero).
bool is_stationary(const Subsolution& sub);

struct VerifyGrid {
    double t_lo = 0.0;
    double t_hi = 1.0;
    int nt = 100;
    double x_lo = 0.0;
    double x_hi = 1.0;
    int nx = 100;
    double fd_step = 1e-4;  // time finite-difference step
};

struct VerifyReport {
    double max_violation = 0.0;  // max over nodes of -(Ubar_t + Hbar); > 0 means violated
    double violation_t = 0.0;
    double violation_x = 0.0;
    double terminal_gap = 0.0;  // max over nodes of Ubar(T, x) - h(x)
    double terminal_gap_x = 0.0;
    double tol = 0.0;
    bool passed = false;
};

// Checks Ubar_t + Hbar(x, Ubar_x) >= -tol on the grid (time derivative by
// second-order finite differences, one-sided at the ends) and the terminal
// inequality Ubar(T, x) <= h(x) + tol. A grid touching or spanning x = 0 is
// rejected for the terminal type, which is non-smooth there.
VerifyReport verify_subsolution(const Subsolution& sub, const Hamiltonian1D& ham,
                                const VerifyGrid& grid, double tol);

}  // namespace roughmc
