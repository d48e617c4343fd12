// roughmc: rare-event Monte Carlo for multiscale Langevin diffusions.
//
//   roughmc run --config FILE [--seed N] [--workers N|auto] [--out PATH] [--plot-data PATH]
//   roughmc preset --table {1|2|3} --row K [--scale-n F] [common flags] [--emit-config PATH]
//   roughmc plot-data --csv IN --out PATH
//
// Exit codes: 0 success, 2 refusal (step budget), 1 error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "roughmc/experiment.hpp"

namespace {

using roughmc::ExperimentResult;
using roughmc::ExperimentSpec;

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("ROUGHMC_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    try {
        return std::stoull(raw);
    } catch (const std::exception&) {
        throw std::runtime_error("ROUGHMC_SEED is not a valid unsigned integer");
    }
}

// Precedence: --seed flag, then an explicit config key, then ROUGHMC_SEED.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, bool config_explicit,
                           std::uint64_t config_value) {
    if (flag) return *flag;
    if (config_explicit) return config_value;
    if (const auto env = env_seed()) return *env;
    return config_value;
}

int run_resolved(ExperimentSpec spec, const std::string& plot_path) {
    const ExperimentResult result = roughmc::run_experiment(spec);

    if (!spec.out_path.empty()) {
        std::ofstream out(spec.out_path);
        if (!out) {
            std::cerr << "error: cannot write output path " << spec.out_path << '\n';
            return 1;
        }
        roughmc::write_csv_header(out);
        for (const auto& row : result.rows) roughmc::write_csv_row(out, row);
    }
    if (!plot_path.empty()) {
        std::ofstream out(plot_path);
        if (!out) {
            std::cerr << "error: cannot write plot data path " << plot_path << '\n';
            return 1;
        }
        roughmc::write_plot_data(out, roughmc::emit_plot_data(result.rows));
    }
    std::cout << result.render_summary();
    if (!spec.out_path.empty()) {
        std::cout << "wrote " << result.rows.size() << " CSV rows to " << spec.out_path << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rare-event Monte Carlo for multiscale Langevin diffusions"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;
    std::string workers_flag;
    std::string out_flag;
    std::string plot_path;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed_flag, "master seed (overrides config and ROUGHMC_SEED)");
        cmd->add_option("--workers", workers_flag, "worker count or 'auto'");
        cmd->add_option("--out", out_flag, "CSV output path");
        cmd->add_option("--plot-data", plot_path, "write plot-ready table to this path");
    };

    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "experiment config file")->required();
    add_common(run_cmd);

    auto* preset_cmd = app.add_subcommand("preset", "run a built-in experiment family row");
    int table = 0;
    int row = 0;
    double scale_n = 1.0;
    std::string emit_config;
    preset_cmd->add_option("--table", table, "table number: 1, 2 or 3")->required();
    preset_cmd->add_option("--row", row, "row within the table (1-based)")->required();
    preset_cmd->add_option("--scale-n", scale_n, "sample-size factor: n_paths = 1e7 * scale_n");
    preset_cmd->add_option("--emit-config", emit_config, "also write the resolved config here");
    add_common(preset_cmd);

    auto* plot_cmd = app.add_subcommand("plot-data", "reshape result CSVs for plotting");
    std::string csv_in;
    std::string plot_out;
    plot_cmd->add_option("--csv", csv_in, "input CSV (schema as written by run/preset)")->required();
    plot_cmd->add_option("--out", plot_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto apply_worker_flag = [&](ExperimentSpec& spec) {
            if (workers_flag.empty()) return;
            spec.workers = workers_flag == "auto" ? 0 : std::stoi(workers_flag);
        };

        if (run_cmd->parsed()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot open config " << config_path << '\n';
                return 1;
            }
            auto parsed = roughmc::parse_config(in);
            parsed.spec.master_seed = resolve_seed(seed_flag, parsed.keys_seen.count("master_seed") > 0,
                                                   parsed.spec.master_seed);
            apply_worker_flag(parsed.spec);
            if (!out_flag.empty()) parsed.spec.out_path = out_flag;
            return run_resolved(parsed.spec, plot_path);
        }
        if (preset_cmd->parsed()) {
            ExperimentSpec spec = roughmc::preset(table, row, scale_n);
            spec.master_seed = resolve_seed(seed_flag, false, spec.master_seed);
            apply_worker_flag(spec);
            if (!out_flag.empty()) spec.out_path = out_flag;
            if (!emit_config.empty()) {
                std::ofstream out(emit_config);
                if (!out) {
                    std::cerr << "error: cannot write config to " << emit_config << '\n';
                    return 1;
                }
                out << roughmc::serialize_config(spec);
            }
            return run_resolved(spec, plot_path);
        }
        if (plot_cmd->parsed()) {
            std::ifstream in(csv_in);
            if (!in) {
                std::cerr << "error: cannot open CSV " << csv_in << '\n';
                return 1;
            }
            const auto rows = roughmc::read_csv(in);
            std::ofstream out(plot_out);
            if (!out) {
                std::cerr << "error: cannot write " << plot_out << '\n';
                return 1;
            }
            roughmc::write_plot_data(out, roughmc::emit_plot_data(rows));
            return 0;
        }
    } catch (const roughmc::BudgetRefused& refusal) {
        std::cerr << "refused: estimated step budget " << refusal.estimated_steps
                  << " exceeds ceiling " << refusal.ceiling
                  << " (raise step_budget_ceiling or reduce n_paths)\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 1;
}
