#include "roughmc/periodic_env.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughmc {

namespace {

// Trapezoid over one period; endpoints coincide by periodicity so this is
// the rectangle rule on n_quad nodes.
double period_integral(const PeriodicModel& model, double sign, int n_quad) {
    const double h = model.lambda / n_quad;
    double sum = 0.0;
    for (int i = 0; i < n_quad; ++i) {
        const double y = i * h;
        const double g = std::exp(sign * model.Q(y) / model.D);
        if (!std::isfinite(g)) {
            throw std::domain_error("compute_constants: non-finite integrand exp(" +
                                    std::string(sign > 0 ? "+" : "-") +
                                    "Q/D) at quadrature node y=" + std::to_string(y));
        }
        sum += g;
    }
    return sum * h;
}

}  // namespace

EffectiveCoefficients compute_constants(const PeriodicModel& model, int n_quad) {
    if (n_quad < 16) {
        throw std::invalid_argument("compute_constants: n_quad must be >= 16");
    }
    if (!(model.lambda > 0.0) || !(model.D > 0.0)) {
        throw std::invalid_argument("compute_constants: lambda and D must be positive");
    }
    EffectiveCoefficients c;
    c.L = period_integral(model, -1.0, n_quad);
    c.Lhat = period_integral(model, +1.0, n_quad);
    c.kappa = model.lambda * model.lambda / (c.L * c.Lhat);
    c.q = 2.0 * model.D * c.kappa;
    return c;
}

double corrector_factor(const PeriodicModel& model, const EffectiveCoefficients& coeffs, double y) {
    return (model.lambda / coeffs.Lhat) * std::exp(model.Q(y) / model.D);
}

double effective_drift(const PeriodicModel& model, const EffectiveCoefficients& coeffs, double x) {
    return -coeffs.kappa * model.Vprime(x);
}

void validate_model(const PeriodicModel& model, int n_grid, double tol) {
    const double h_fd = 1e-5 * model.lambda;
    for (int i = 0; i < n_grid; ++i) {
        const double y = (i + 0.37) * model.lambda / n_grid;
        if (std::abs(model.Q(y + model.lambda) - model.Q(y)) > tol) {
            throw std::invalid_argument("validate_model: Q not periodic with the declared period at y=" +
                                        std::to_string(y));
        }
        const double fd = (model.Q(y + h_fd) - model.Q(y - h_fd)) / (2.0 * h_fd);
        const double scale = 1.0 + std::abs(model.Qprime(y));
        if (std::abs(fd - model.Qprime(y)) > tol * scale + 1e3 * h_fd * h_fd) {
            throw std::invalid_argument("validate_model: Qprime inconsistent with dQ/dy at y=" +
                                        std::to_string(y));
        }
    }
}

}  // namespace roughmc
