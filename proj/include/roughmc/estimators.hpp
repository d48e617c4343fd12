#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "roughmc/sde_simulator.hpp"

namespace roughmc {

// Sentinel written for relative errors when the sample mean is not positive.
inline constexpr double kUndefinedRelError = -1.0;

// Payoff definition for one experiment. FiniteHorizon: exp(-h(X_T)/eps);
// ExitFromInterval: indicator of exit through x_plus.
struct PayoffSpec {
    SimMode mode = SimMode::FiniteHorizon;
    std::function<double(double)> h;  // terminal cost (finite-horizon mode)
    double epsilon = 1.0;
};

double payoff(const PayoffSpec& spec, const TrajectoryOutcome& outcome);

// payoff * exp(log_weight), computed in a single exponential so that tiny
// terminal payoffs and large negative weights do not underflow separately.
double weighted_sample(const PayoffSpec& spec, const TrajectoryOutcome& outcome);

// Streaming Welford moments; merging partials is associative up to rounding,
// so chunked parallel reductions match the sequential pass.
struct MomentAccumulator {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations
    std::uint64_t censored = 0;
    std::uint64_t invalid = 0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / double(n);
        m2 += delta * (x - mean);
    }

    void merge(const MomentAccumulator& other);
};

struct EstimatorSummary {
    std::uint64_t n = 0;
    double mean = 0.0;
    double second_moment = 0.0;   // mean of Gamma^2
    double re_per_sample = 0.0;   // s / mean
    double re_of_mean = 0.0;      // s / (mean sqrt(n))
    double neg_eps_log_mean = 0.0;
    double neg_eps_log_m2 = 0.0;
    std::uint64_t censored = 0;
    std::uint64_t invalid = 0;
};

EstimatorSummary summarize(const MomentAccumulator& acc, double epsilon);

// Aggregate pre-weighted sample values Gamma_i. Throws for n < 2.
EstimatorSummary aggregate_values(std::span<const double> gammas, double epsilon);

// Gamma_i = payoff_i * exp(log_weight_i); censored/invalid paths count as 0.
EstimatorSummary aggregate(std::span<const TrajectoryOutcome> outcomes, const PayoffSpec& payoff_spec,
                           double epsilon);

struct CrossCheckRow {
    std::string name;
    EstimatorSummary summary;
    double re_ref = 0.0;           // s_i / (theta_ref sqrt(n_i))
    double z_vs_ref = 0.0;         // mean agreement z-score against the reference
    double var_reduction = 0.0;    // Var(first summary) / Var_i
};

struct PairwiseZ {
    int i = 0;
    int j = 0;
    double z = 0.0;
};

struct CrossCheckReport {
    int reference = 0;
    bool reference_fallback = false;  // reference mean was non-positive
    std::vector<CrossCheckRow> rows;
    std::vector<PairwiseZ> pairwise;  // mean-agreement z for every pair
    std::string render() const;
};

// Renormalized comparison of estimators from the same experiment. Relative
// errors of every estimator are divided by the reference mean (the most
// accurate estimate of the common target); variance-reduction factors are
// quoted against the first summary.
CrossCheckReport cross_check(const std::vector<std::string>& names,
                             const std::vector<EstimatorSummary>& summaries, int reference);

// CSV schema shared by the CLI and the experiment runner.
struct CsvRow {
    std::string experiment_id;
    double epsilon = 0.0;
    double delta = 0.0;
    std::string estimator;
    EstimatorSummary summary;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

extern const char* const kCsvHeader;

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const CsvRow& row);
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace roughmc
