#pragma once

#include <cmath>
#include <functional>
#include <memory>

#include "roughmc/periodic_env.hpp"
#include "roughmc/random_env.hpp"

namespace roughmc {

// What the simulator needs from an environment, with the homogenized
// constants folded in: the corrector 1 + chi'(y) equals
// corrector_scale * exp(Q(y)/D) in both the periodic and random cases.
struct Environment {
    std::function<double(double)> Q = [](double) { return 0.0; };
    std::function<double(double)> Qprime = [](double) { return 0.0; };
    std::function<double(double)> Vprime = [](double) { return 0.0; };
    double D = 1.0;
    double kappa = 1.0;
    double corrector_scale = 1.0;

    double sigma() const { return std::sqrt(2.0 * D); }
    double q() const { return 2.0 * D * kappa; }
    double corrector(double y) const { return corrector_scale * std::exp(Q(y) / D); }
    double effective_drift(double x) const { return -kappa * Vprime(x); }
};

Environment make_environment(const PeriodicModel& model, const EffectiveCoefficients& coeffs);

// Random environment with exact per-call mode summation.
Environment make_environment(std::shared_ptr<const FieldRealization> field,
                             const RandomHomogenized& consts,
                             std::function<double(double)> Vprime, double D);

// Random environment evaluated through a Hermite table (exact outside it).
Environment make_environment(std::shared_ptr<const TabulatedField> field,
                             const RandomHomogenized& consts,
                             std::function<double(double)> Vprime, double D);

// Q == 0: kappa = 1, corrector == 1, q = 2D.
Environment make_flat_environment(std::function<double(double)> Vprime, double D);

}  // namespace roughmc
