#pragma once

#include <functional>

namespace roughmc {

// First order Langevin model with a periodic fast potential:
//   dX = [-(eps/delta) Q'(X/delta) - V'(X)] dt + sqrt(eps) sqrt(2D) dW.
// Q is lambda-periodic; derivatives are supplied by the caller.
struct PeriodicModel {
    std::function<double(double)> Q;
    std::function<double(double)> Qprime;
    std::function<double(double)> V;
    std::function<double(double)> Vprime;
    double lambda = 1.0;
    double D = 1.0;
};

// Homogenized constants of the periodic cell problem:
//   L    = int_0^lambda exp(-Q/D) dy        (Gibbs normalizer)
//   Lhat = int_0^lambda exp(+Q/D) dy
//   kappa = lambda^2 / (L Lhat),  q = 2 D kappa (effective diffusivity).
struct EffectiveCoefficients {
    double L = 0.0;
    double Lhat = 0.0;
    double kappa = 0.0;
    double q = 0.0;
};

// Composite trapezoid quadrature of exp(±Q/D) over one period.
// Spectrally accurate for smooth periodic Q. Throws std::invalid_argument
// for n_quad < 16 and std::domain_error when exp(±Q/D) overflows, naming
// the offending node.
EffectiveCoefficients compute_constants(const PeriodicModel& model, int n_quad = 1024);

// 1 + chi'(y) = (lambda / Lhat) exp(Q(y)/D); multiplies the homogenized
// feedback control to produce the multiscale one.
double corrector_factor(const PeriodicModel& model, const EffectiveCoefficients& coeffs, double y);

// r(x) = -kappa V'(x).
double effective_drift(const PeriodicModel& model, const EffectiveCoefficients& coeffs, double x);

// Spot-checks the declared invariants of a model on a grid: Q periodic with
// period lambda, Qprime consistent with a central difference of Q.
// Throws std::invalid_argument naming the failed check.
void validate_model(const PeriodicModel& model, int n_grid = 64, double tol = 1e-6);

}  // namespace roughmc
