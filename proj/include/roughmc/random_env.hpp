#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "roughmc/rng.hpp"

namespace roughmc {

// Stationary zero-mean Gaussian field with squared-exponential covariance
//   E[Q(x)Q(x+r)] = variance * exp(-r^2 / corr_length_sq),
// sampled by the randomization (spectral) method with n_modes modes.
struct GaussianFieldSpec {
    double variance = 1.0;
    double corr_length_sq = 1.0;
    int n_modes = 128;
    std::uint64_t seed = 0;
};

// One frozen realization:
//   Q(y) = scale * sum_j [ xi_j cos(w_j y) + eta_j sin(w_j y) ],
// scale = sqrt(variance / M). C-infinity with an analytic derivative.
struct FieldRealization {
    std::vector<double> frequencies;
    std::vector<double> cos_amps;
    std::vector<double> sin_amps;
    double scale = 1.0;

    double value(double y) const;
    double derivative(double y) const;
};

// Homogenized constants for the random environment:
//   K = E[exp(-Q/D)], Khat = E[exp(+Q/D)], kappa = 1/(K Khat), q = 2D kappa.
struct RandomHomogenized {
    double K = 1.0;
    double Khat = 1.0;
    double kappa = 1.0;
    double q = 0.0;
};

// Frequencies drawn from the spectral measure of the covariance (Gaussian
// with variance 2/corr_length_sq); amplitudes i.i.d. standard normal.
FieldRealization sample_field(const GaussianFieldSpec& spec, RngStream& rng);

// Convenience overload seeding a dedicated stream from spec.seed.
FieldRealization sample_field(const GaussianFieldSpec& spec);

// Closed form from the Gaussian marginal: K = Khat = exp(variance/(2 D^2)).
RandomHomogenized homogenized_constants(const GaussianFieldSpec& spec, double D);

// 1 + chi'(y) = (1/Khat) exp(Q(y)/D).
double random_corrector_factor(const FieldRealization& field, const RandomHomogenized& consts,
                               double D, double y);

// Flat text record: first line M, then M lines "omega xi eta". Values are
// written with round-trip precision so a reload reproduces the field bitwise.
void save_field(std::ostream& out, const FieldRealization& field);
FieldRealization load_field(std::istream& in, double variance = 1.0);

// Piecewise cubic Hermite interpolant of a realization on [y_lo, y_hi],
// matching the exact values and derivatives at the nodes; the reported
// derivative is the exact derivative of the reported value. Falls back to
// exact mode summation outside the table. Used to keep per-step cost flat
// when trajectories evaluate a many-mode field millions of times.
class TabulatedField {
public:
    TabulatedField(FieldRealization field, double y_lo, double y_hi, double dy = 0.01);

    double value(double y) const;
    double derivative(double y) const;
    const FieldRealization& source() const { return field_; }

private:
    FieldRealization field_;
    double y_lo_ = 0.0;
    double dy_ = 1.0;
    std::vector<double> q_;
    std::vector<double> qp_;
};

}  // namespace roughmc
