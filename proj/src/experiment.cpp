#include "roughmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace roughmc {

namespace {

std::function<double(double)> slow_prime(SlowPotential v) {
    switch (v) {
        case SlowPotential::Zero: return [](double) { return 0.0; };
        case SlowPotential::Linear: return [](double) { return 1.0; };
        case SlowPotential::Quadratic: return [](double x) { return x; };
    }
    return [](double) { return 0.0; };
}

PeriodicModel periodic_model(const ExperimentSpec& spec) {
    PeriodicModel m;
    if (spec.fast_potential == FastPotential::CosSin) {
        m.Q = [](double y) { return std::cos(y) + std::sin(y); };
        m.Qprime = [](double y) { return -std::sin(y) + std::cos(y); };
    } else {
        m.Q = [](double) { return 0.0; };
        m.Qprime = [](double) { return 0.0; };
    }
    m.V = [vp = spec.slow_potential](double x) {
        switch (vp) {
            case SlowPotential::Zero: return 0.0;
            case SlowPotential::Linear: return x;
            case SlowPotential::Quadratic: return 0.5 * x * x;
        }
        return 0.0;
    };
    m.Vprime = slow_prime(spec.slow_potential);
    m.lambda = spec.lambda;
    m.D = spec.D;
    return m;
}

// Crude horizon proxy for exit problems, used only for the refusal estimate:
// the smaller of the drift and diffusion crossing times of the homogenized
// dynamics, with slack. The per-path max_steps budget is the hard stop.
double exit_horizon_proxy(const ExperimentSpec& spec, const Environment& env) {
    const double width = spec.x_plus - spec.x_minus;
    const double vp = std::max({std::abs(env.Vprime(spec.x_minus)), std::abs(env.Vprime(spec.x_plus)),
                                std::abs(env.Vprime(spec.x0))});
    const double drift_speed = env.kappa * vp;
    const double t_drift = drift_speed > 0.0 ? width / drift_speed : std::numeric_limits<double>::infinity();
    const double t_diff = width * width / (spec.epsilon * env.q());
    return 4.0 * std::min(t_drift, t_diff);
}

}  // namespace

BudgetRefused::BudgetRefused(double estimated, double ceiling_)
    : std::runtime_error("step budget " + std::to_string(estimated) + " exceeds ceiling " +
                         std::to_string(ceiling_)),
      estimated_steps(estimated),
      ceiling(ceiling_) {}

ExperimentAssets prepare(const ExperimentSpec& spec) {
    if (!(spec.epsilon > 0.0) || !(spec.delta > 0.0) || !(spec.D > 0.0)) {
        throw std::invalid_argument("prepare: epsilon, delta, D must be positive");
    }
    if (spec.estimators.empty()) {
        throw std::invalid_argument("prepare: estimators must be non-empty");
    }
    if (spec.mode == SimMode::ExitFromInterval &&
        !(spec.x_minus < spec.x0 && spec.x0 < spec.x_plus)) {
        throw std::invalid_argument("prepare: x0 must lie inside (x_minus, x_plus)");
    }

    ExperimentAssets assets;

    switch (spec.environment) {
        case EnvironmentKind::Flat:
            assets.env = make_flat_environment(slow_prime(spec.slow_potential), spec.D);
            break;
        case EnvironmentKind::Periodic: {
            const PeriodicModel model = periodic_model(spec);
            validate_model(model);
            assets.env = make_environment(model, compute_constants(model));
            break;
        }
        case EnvironmentKind::Random: {
            GaussianFieldSpec fspec;
            fspec.variance = spec.variance;
            fspec.corr_length_sq = spec.corr_length_sq;
            fspec.n_modes = spec.n_modes;
            fspec.seed = spec.master_seed;
            std::shared_ptr<const FieldRealization> field;
            if (!spec.field_in.empty()) {
                std::ifstream in(spec.field_in);
                if (!in) throw std::runtime_error("prepare: cannot read field file " + spec.field_in);
                field = std::make_shared<FieldRealization>(load_field(in, spec.variance));
            } else {
                field = std::make_shared<FieldRealization>(sample_field(fspec));
            }
            const RandomHomogenized consts = homogenized_constants(fspec, spec.D);
            if (spec.tabulate_field && spec.mode == SimMode::ExitFromInterval) {
                const double margin = 0.3 * (spec.x_plus - spec.x_minus);
                const double y_lo = (spec.x_minus - margin) / spec.delta;
                const double y_hi = (spec.x_plus + margin) / spec.delta;
                const double dy = 0.01 * std::sqrt(spec.corr_length_sq);
                auto table = std::make_shared<TabulatedField>(*field, y_lo, y_hi, dy);
                assets.env = make_environment(table, consts, slow_prime(spec.slow_potential), spec.D);
            } else {
                assets.env = make_environment(field, consts, slow_prime(spec.slow_potential), spec.D);
            }
            assets.field = field;
            break;
        }
    }

    SubsolutionKind kind = spec.subsolution;
    if (kind == SubsolutionKind::Auto) {
        if (spec.mode == SimMode::FiniteHorizon) {
            kind = SubsolutionKind::TerminalQuadratic;
        } else {
            kind = spec.slow_potential == SlowPotential::Linear ? SubsolutionKind::ExitLinear
                                                                : SubsolutionKind::ExitRestPoint;
        }
    }
    switch (kind) {
        case SubsolutionKind::Zero:
            assets.subsolution = ZeroSubsolution{};
            break;
        case SubsolutionKind::TerminalQuadratic:
            assets.subsolution = TerminalQuadraticSubsolution{assets.env.kappa, spec.D, spec.T};
            break;
        case SubsolutionKind::ExitLinear:
            assets.subsolution =
                ExitSubsolution{spec.D, spec.x_plus, spec.x_minus, ExitShape::LinearDrift};
            break;
        case SubsolutionKind::ExitRestPoint:
            assets.subsolution =
                ExitSubsolution{spec.D, spec.x_plus, spec.x_minus, ExitShape::RestPoint};
            break;
        case SubsolutionKind::Auto:
            break;  // unreachable
    }

    assets.params.epsilon = spec.epsilon;
    assets.params.delta = spec.delta;
    assets.params.t0 = spec.t0;
    assets.params.T = spec.T;
    assets.params.x0 = spec.x0;
    assets.params.dt_rule = spec.dt_rule;
    assets.params.mode = spec.mode;
    assets.params.x_minus = spec.x_minus;
    assets.params.x_plus = spec.x_plus;
    assets.params.max_steps = spec.max_steps;

    const ResolvedStep step = resolve_step(assets.params);
    assets.dt = step.dt;
    assets.dt_clamped = step.clamped;
    if (step.clamped) {
        assets.params.dt_rule = {DtRule::Fixed, step.dt};
    }

    assets.payoff.mode = spec.mode;
    assets.payoff.epsilon = spec.epsilon;
    assets.payoff.h = [](double x) {
        const double a = std::abs(x) - 1.0;
        return a * a;
    };
    return assets;
}

MomentAccumulator run_estimator(const ExperimentAssets& assets, EstimatorKind kind,
                                std::uint64_t master_seed, std::uint64_t n_paths, int workers) {
    const int slot = int(kind);
    ControlScheme scheme;
    scheme.variant = control_variant(kind);
    scheme.subsolution = &assets.subsolution;

    // Fixed-size chunks keep the merge tree independent of the worker count.
    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t n_chunks = (n_paths + kChunk - 1) / kChunk;
    std::vector<MomentAccumulator> parts(n_chunks);

    int n_workers = workers > 0 ? workers : int(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    n_workers = int(std::min<std::uint64_t>(std::uint64_t(n_workers), n_chunks));

    std::atomic<std::uint64_t> next_chunk{0};
    const auto work = [&]() {
        while (true) {
            const std::uint64_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks) break;
            MomentAccumulator acc;
            const std::uint64_t begin = c * kChunk;
            const std::uint64_t end = std::min(begin + kChunk, n_paths);
            for (std::uint64_t traj = begin; traj < end; ++traj) {
                RngStream rng(master_seed, trajectory_stream(slot, traj));
                const TrajectoryOutcome outcome =
                    simulate_path(assets.env, assets.params, scheme, rng);
                acc.add(weighted_sample(assets.payoff, outcome));
                if (outcome.censored) ++acc.censored;
                if (!outcome.valid) ++acc.invalid;
            }
            parts[c] = acc;
        }
    };

    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    MomentAccumulator total;
    for (const auto& part : parts) total.merge(part);
    return total;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentAssets assets = prepare(spec);

    // Refuse rather than truncate when the run cannot fit the step ceiling.
    const double horizon = spec.mode == SimMode::FiniteHorizon
                               ? (spec.T - spec.t0)
                               : exit_horizon_proxy(spec, assets.env);
    const double estimated_steps =
        double(spec.n_paths) * (horizon / assets.dt) * double(spec.estimators.size());
    if (estimated_steps > spec.step_budget_ceiling) {
        throw BudgetRefused(estimated_steps, spec.step_budget_ceiling);
    }

    if (!spec.field_out.empty() && assets.field) {
        std::ofstream out(spec.field_out);
        if (!out) throw std::runtime_error("run_experiment: cannot write field file " + spec.field_out);
        save_field(out, *assets.field);
    }

    ExperimentResult result;
    result.spec = spec;
    result.dt = assets.dt;
    result.dt_clamped = assets.dt_clamped;
    if (assets.dt_clamped) {
        result.warnings.push_back("step rule exceeded the horizon; dt clamped to " +
                                  std::to_string(assets.dt));
    }

    std::vector<std::string> names;
    std::vector<EstimatorSummary> summaries;
    for (const EstimatorKind kind : spec.estimators) {
        const auto tic = std::chrono::steady_clock::now();
        const MomentAccumulator acc =
            run_estimator(assets, kind, spec.master_seed, spec.n_paths, spec.workers);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
        EstimatorRun run;
        run.kind = kind;
        run.summary = summarize(acc, spec.epsilon);
        run.wall_seconds = secs;
        result.runs.push_back(run);
        names.push_back(estimator_name(kind));
        summaries.push_back(run.summary);

        CsvRow row;
        row.experiment_id = spec.experiment_id;
        row.epsilon = spec.epsilon;
        row.delta = spec.delta;
        row.estimator = estimator_name(kind);
        row.summary = run.summary;
        row.wall_seconds = secs;
        row.seed = spec.master_seed;
        result.rows.push_back(row);

        if (run.summary.n > 0 && double(run.summary.censored) > 1e-3 * double(run.summary.n)) {
            result.warnings.push_back(std::string(estimator_name(kind)) +
                                      ": censored fraction above 0.1%; results unreliable");
        }
        if (run.summary.invalid > 0) {
            result.warnings.push_back(std::string(estimator_name(kind)) + ": " +
                                      std::to_string(run.summary.invalid) +
                                      " paths overflowed and were scored 0");
        }
    }

    int reference = 0;
    for (std::size_t i = 0; i < spec.estimators.size(); ++i) {
        if (spec.estimators[i] == EstimatorKind::Theta1) reference = int(i);
    }
    result.report = cross_check(names, summaries, reference);
    return result;
}

std::string ExperimentResult::render_summary() const {
    std::ostringstream os;
    os << "experiment " << spec.experiment_id << ": epsilon=" << spec.epsilon
       << " delta=" << spec.delta << " dt=" << dt << " n_paths=" << spec.n_paths
       << " seed=" << spec.master_seed << '\n';
    os << report.render();
    for (const auto& w : warnings) os << "warning: " << w << '\n';
    return os.str();
}

std::vector<PlotRecord> emit_plot_data(const std::vector<CsvRow>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("emit_plot_data: no experiment rows");
    }
    std::vector<PlotRecord> records;
    records.reserve(rows.size());
    for (const auto& row : rows) {
        PlotRecord rec;
        rec.experiment = row.experiment_id;
        // Ladder rows of one table group together.
        const auto pos = rec.experiment.rfind("_row");
        if (pos != std::string::npos &&
            rec.experiment.find_first_not_of("0123456789", pos + 4) == std::string::npos) {
            rec.experiment.erase(pos);
        }
        rec.estimator = row.estimator;
        rec.epsilon = row.epsilon;
        rec.mean = row.summary.mean;
        rec.re_mean = row.summary.re_of_mean;
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(), [](const PlotRecord& a, const PlotRecord& b) {
        if (a.experiment != b.experiment) return a.experiment < b.experiment;
        if (a.estimator != b.estimator) return a.estimator < b.estimator;
        return a.epsilon < b.epsilon;
    });
    return records;
}

void write_plot_data(std::ostream& out, const std::vector<PlotRecord>& records) {
    out << "experiment,estimator,epsilon,mean,re_mean\n";
    for (const auto& rec : records) {
        out << rec.experiment << ',' << rec.estimator << ',' << rec.epsilon << ',' << rec.mean << ','
            << rec.re_mean << '\n';
    }
}

}  // namespace roughmc
