#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughmc/environment.hpp"
#include "roughmc/estimators.hpp"
#include "roughmc/sde_simulator.hpp"
#include "roughmc/subsolution.hpp"

namespace roughmc {

enum class Family { PeriodicTerminal, RandomExitNegDrift, RandomExitRestPoint, Custom };
enum class EnvironmentKind { Flat, Periodic, Random };
enum class FastPotential { Zero, CosSin };
enum class SlowPotential { Zero, Linear, Quadratic };
enum class SubsolutionKind { Auto, Zero, TerminalQuadratic, ExitLinear, ExitRestPoint };
enum class EstimatorKind { Theta0, Theta1, Theta2 };

const char* estimator_name(EstimatorKind kind);
ControlVariant control_variant(EstimatorKind kind);

// Full definition of one experiment; serializes to a flat key=value config.
struct ExperimentSpec {
    Family family = Family::Custom;
    std::string experiment_id = "custom";
    double epsilon = 0.25;
    double delta = 0.1;
    std::uint64_t n_paths = 10000;
    std::vector<EstimatorKind> estimators = {EstimatorKind::Theta0, EstimatorKind::Theta1,
                                             EstimatorKind::Theta2};
    StepRule dt_rule = {DtRule::ScaledTol, 1e-3};
    std::uint64_t master_seed = 0;
    int workers = 0;  // 0 = auto
    std::string out_path = "results.csv";

    // Model.
    EnvironmentKind environment = EnvironmentKind::Periodic;
    FastPotential fast_potential = FastPotential::CosSin;
    SlowPotential slow_potential = SlowPotential::Quadratic;
    double D = 1.0;
    double lambda = 6.283185307179586;
    double variance = 1.0;
    double corr_length_sq = 1.0;
    int n_modes = 128;
    std::string field_in;   // optional: load a saved field realization
    std::string field_out;  // optional: save the realization used
    bool tabulate_field = true;

    // Problem.
    SimMode mode = SimMode::FiniteHorizon;
    double t0 = 0.0;
    double T = 1.0;
    double x0 = 0.05;
    double x_minus = -0.5;
    double x_plus = 0.5;
    SubsolutionKind subsolution = SubsolutionKind::Auto;
    std::uint64_t max_steps = 100'000'000;
    double step_budget_ceiling = 1e12;

    bool operator==(const ExperimentSpec&) const = default;
};

// Flat "key = value" config with '#' comments. Unknown keys are an error.
std::string serialize_config(const ExperimentSpec& spec);
struct ParsedConfig {
    ExperimentSpec spec;
    std::set<std::string> keys_seen;
};
ParsedConfig parse_config(std::istream& in);
ParsedConfig parse_config_string(const std::string& text);

// Built-in experiment families, one row of the (epsilon, delta) ladder each.
// n_paths = round(1e7 * scale_n). Throws for unknown table/row.
ExperimentSpec preset(int table, int row, double scale_n = 1.0);
int preset_rows(int table);

struct BudgetRefused : std::runtime_error {
    BudgetRefused(double estimated, double ceiling);
    double estimated_steps;
    double ceiling;
};

// Everything resolved from a spec: environment, subsolution, payoff, params.
struct ExperimentAssets {
    Environment env;
    std::shared_ptr<const FieldRealization> field;  // random environments only
    Subsolution subsolution = ZeroSubsolution{};
    SimParams params;
    PayoffSpec payoff;
    double dt = 0.0;
    bool dt_clamped = false;
};

ExperimentAssets prepare(const ExperimentSpec& spec);

struct EstimatorRun {
    EstimatorKind kind = EstimatorKind::Theta0;
    EstimatorSummary summary;
    double wall_seconds = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    double dt = 0.0;
    bool dt_clamped = false;
    std::vector<EstimatorRun> runs;
    std::vector<CsvRow> rows;
    CrossCheckReport report;
    std::vector<std::string> warnings;
    std::string render_summary() const;
};

// Runs every requested estimator on independent trajectory streams derived
// from master_seed. Refuses (BudgetRefused) when the estimated step budget
// exceeds the ceiling instead of shrinking the run. Results are independent
// of the worker count for a fixed master seed.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Aggregates one estimator over n_paths trajectory streams; exposed for
// tests that need raw accumulators.
MomentAccumulator run_estimator(const ExperimentAssets& assets, EstimatorKind kind,
                                std::uint64_t master_seed, std::uint64_t n_paths, int workers);

struct PlotRecord {
    std::string experiment;  // experiment id with any trailing "_row<k>" stripped
    std::string estimator;
    double epsilon = 0.0;
    double mean = 0.0;
    double re_mean = 0.0;
};

// Tidy long-format table for external plotting, sorted by
// (experiment, estimator, epsilon). Throws for empty input.
std::vector<PlotRecord> emit_plot_data(const std::vector<CsvRow>& rows);
void write_plot_data(std::ostream& out, const std::vector<PlotRecord>& records);

}  // namespace roughmc
