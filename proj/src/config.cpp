#include <charconv>
#include <istream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>

#include "roughmc/experiment.hpp"

namespace roughmc {

namespace {

std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::map<Family, std::string> kFamilyNames = {
    {Family::PeriodicTerminal, "periodic_terminal"},
    {Family::RandomExitNegDrift, "random_exit_neg_drift"},
    {Family::RandomExitRestPoint, "random_exit_rest_point"},
    {Family::Custom, "custom"},
};
const std::map<EnvironmentKind, std::string> kEnvNames = {
    {EnvironmentKind::Flat, "flat"},
    {EnvironmentKind::Periodic, "periodic"},
    {EnvironmentKind::Random, "random"},
};
const std::map<FastPotential, std::string> kFastNames = {
    {FastPotential::Zero, "zero"},
    {FastPotential::CosSin, "cos_sin"},
};
const std::map<SlowPotential, std::string> kSlowNames = {
    {SlowPotential::Zero, "zero"},
    {SlowPotential::Linear, "linear"},
    {SlowPotential::Quadratic, "quadratic"},
};
const std::map<SubsolutionKind, std::string> kSubNames = {
    {SubsolutionKind::Auto, "auto"},
    {SubsolutionKind::Zero, "zero"},
    {SubsolutionKind::TerminalQuadratic, "terminal_quadratic"},
    {SubsolutionKind::ExitLinear, "exit_linear"},
    {SubsolutionKind::ExitRestPoint, "exit_rest_point"},
};
const std::map<EstimatorKind, std::string> kEstNames = {
    {EstimatorKind::Theta0, "theta0"},
    {EstimatorKind::Theta1, "theta1"},
    {EstimatorKind::Theta2, "theta2"},
};

template <typename Enum>
std::string enum_to_string(const std::map<Enum, std::string>& names, Enum v) {
    return names.at(v);
}

template <typename Enum>
Enum enum_from_string(const std::map<Enum, std::string>& names, const std::string& s,
                      const std::string& key) {
    for (const auto& [value, name] : names) {
        if (name == s) return value;
    }
    throw std::runtime_error("config: bad value '" + s + "' for key '" + key + "'");
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad numeric value '" + s + "' for key '" + key + "'");
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad integer value '" + s + "' for key '" + key + "'");
    }
}

}  // namespace

const char* estimator_name(EstimatorKind kind) { return kEstNames.at(kind).c_str(); }

ControlVariant control_variant(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Theta0: return ControlVariant::NoControl;
        case EstimatorKind::Theta1: return ControlVariant::FullMultiscale;
        case EstimatorKind::Theta2: return ControlVariant::HomogenizedOnly;
    }
    return ControlVariant::NoControl;
}

std::string serialize_config(const ExperimentSpec& s) {
    std::ostringstream os;
    os << "# roughmc experiment configuration\n";
    os << "family = " << enum_to_string(kFamilyNames, s.family) << '\n';
    os << "experiment_id = " << s.experiment_id << '\n';
    os << "epsilon = " << fmt(s.epsilon) << '\n';
    os << "delta = " << fmt(s.delta) << '\n';
    os << "n_paths = " << s.n_paths << '\n';
    os << "estimators = ";
    for (std::size_t i = 0; i < s.estimators.size(); ++i) {
        os << (i ? "," : "") << enum_to_string(kEstNames, s.estimators[i]);
    }
    os << '\n';
    os << "dt_rule = " << (s.dt_rule.kind == DtRule::ScaledTol ? "scaled" : "fixed") << '\n';
    if (s.dt_rule.kind == DtRule::ScaledTol) {
        os << "dt_tol = " << fmt(s.dt_rule.value) << '\n';
    } else {
        os << "dt = " << fmt(s.dt_rule.value) << '\n';
    }
    os << "master_seed = " << s.master_seed << '\n';
    if (s.workers == 0) {
        os << "workers = auto\n";
    } else {
        os << "workers = " << s.workers << '\n';
    }
    os << "out = " << s.out_path << '\n';
    os << "environment = " << enum_to_string(kEnvNames, s.environment) << '\n';
    os << "fast_potential = " << enum_to_string(kFastNames, s.fast_potential) << '\n';
    os << "slow_potential = " << enum_to_string(kSlowNames, s.slow_potential) << '\n';
    os << "D = " << fmt(s.D) << '\n';
    os << "lambda = " << fmt(s.lambda) << '\n';
    os << "variance = " << fmt(s.variance) << '\n';
    os << "corr_length_sq = " << fmt(s.corr_length_sq) << '\n';
    os << "n_modes = " << s.n_modes << '\n';
    os << "field_in = " << s.field_in << '\n';
    os << "field_out = " << s.field_out << '\n';
    os << "tabulate_field = " << (s.tabulate_field ? "true" : "false") << '\n';
    os << "mode = " << (s.mode == SimMode::FiniteHorizon ? "finite_horizon" : "exit") << '\n';
    os << "t0 = " << fmt(s.t0) << '\n';
    os << "T = " << fmt(s.T) << '\n';
    os << "x0 = " << fmt(s.x0) << '\n';
    os << "x_minus = " << fmt(s.x_minus) << '\n';
    os << "x_plus = " << fmt(s.x_plus) << '\n';
    os << "subsolution = " << enum_to_string(kSubNames, s.subsolution) << '\n';
    os << "max_steps = " << s.max_steps << '\n';
    os << "step_budget_ceiling = " << fmt(s.step_budget_ceiling) << '\n';
    return os.str();
}

ParsedConfig parse_config(std::istream& in) {
    ParsedConfig out;
    ExperimentSpec& s = out.spec;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (out.keys_seen.count(key)) {
            throw std::runtime_error("config: duplicate key '" + key + "'");
        }
        out.keys_seen.insert(key);

        if (key == "family") {
            s.family = enum_from_string(kFamilyNames, value, key);
        } else if (key == "experiment_id") {
            s.experiment_id = value;
        } else if (key == "epsilon") {
            s.epsilon = parse_double(value, key);
        } else if (key == "delta") {
            s.delta = parse_double(value, key);
        } else if (key == "n_paths") {
            s.n_paths = parse_u64(value, key);
        } else if (key == "estimators") {
            s.estimators.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                s.estimators.push_back(enum_from_string(kEstNames, trim(item), key));
            }
        } else if (key == "dt_rule") {
            if (value == "scaled") {
                s.dt_rule.kind = DtRule::ScaledTol;
            } else if (value == "fixed") {
                s.dt_rule.kind = DtRule::Fixed;
            } else {
                throw std::runtime_error("config: bad value '" + value + "' for key 'dt_rule'");
            }
        } else if (key == "dt_tol" || key == "dt") {
            s.dt_rule.value = parse_double(value, key);
        } else if (key == "master_seed") {
            s.master_seed = parse_u64(value, key);
        } else if (key == "workers") {
            s.workers = value == "auto" ? 0 : int(parse_u64(value, key));
        } else if (key == "out") {
            s.out_path = value;
        } else if (key == "environment") {
            s.environment = enum_from_string(kEnvNames, value, key);
        } else if (key == "fast_potential") {
            s.fast_potential = enum_from_string(kFastNames, value, key);
        } else if (key == "slow_potential") {
            s.slow_potential = enum_from_string(kSlowNames, value, key);
        } else if (key == "D") {
            s.D = parse_double(value, key);
        } else if (key == "lambda") {
            s.lambda = parse_double(value, key);
        } else if (key == "variance") {
            s.variance = parse_double(value, key);
        } else if (key == "corr_length_sq") {
            s.corr_length_sq = parse_double(value, key);
        } else if (key == "n_modes") {
            s.n_modes = int(parse_u64(value, key));
        } else if (key == "field_in") {
            s.field_in = value;
        } else if (key == "field_out") {
            s.field_out = value;
        } else if (key == "tabulate_field") {
            if (value != "true" && value != "false") {
                throw std::runtime_error("config: bad boolean '" + value + "' for key '" + key + "'");
            }
            s.tabulate_field = value == "true";
        } else if (key == "mode") {
            if (value == "finite_horizon") {
                s.mode = SimMode::FiniteHorizon;
            } else if (value == "exit") {
                s.mode = SimMode::ExitFromInterval;
            } else {
                throw std::runtime_error("config: bad value '" + value + "' for key 'mode'");
            }
        } else if (key == "t0") {
            s.t0 = parse_double(value, key);
        } else if (key == "T") {
            s.T = parse_double(value, key);
        } else if (key == "x0") {
            s.x0 = parse_double(value, key);
        } else if (key == "x_minus") {
            s.x_minus = parse_double(value, key);
        } else if (key == "x_plus") {
            s.x_plus = parse_double(value, key);
        } else if (key == "subsolution") {
            s.subsolution = enum_from_string(kSubNames, value, key);
        } else if (key == "max_steps") {
            s.max_steps = parse_u64(value, key);
        } else if (key == "step_budget_ceiling") {
            s.step_budget_ceiling = parse_double(value, key);
        } else {
            throw std::runtime_error("config: invalid key '" + key + "'");
        }
    }
    if (s.estimators.empty()) {
        throw std::runtime_error("config: estimators must be non-empty");
    }
    return out;
}

ParsedConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

namespace {

struct PresetRow {
    double epsilon;
    double delta;
};

constexpr PresetRow kTable1[] = {{0.25, 0.1},    {0.125, 0.04}, {0.063, 0.016}, {0.03125, 0.007},
                                 {0.025, 0.004}, {0.02, 0.002}, {0.015, 0.0013}};
constexpr PresetRow kTable2[] = {{0.25, 0.1}, {0.125, 0.04}, {0.0625, 0.018},
                                 {0.05, 0.01}, {0.04, 0.007}, {0.025, 0.004}};
constexpr PresetRow kTable3[] = {{0.25, 0.1},      {0.125, 0.04},  {0.0625, 0.018},
                                 {0.03125, 0.008}, {0.025, 0.006}, {0.02, 0.0045}};

}  // namespace

int preset_rows(int table) {
    switch (table) {
        case 1: return int(std::size(kTable1));
        case 2: return int(std::size(kTable2));
        case 3: return int(std::size(kTable3));
        default: throw std::invalid_argument("preset: unknown table " + std::to_string(table));
    }
}

ExperimentSpec preset(int table, int row, double scale_n) {
    if (row < 1 || row > preset_rows(table)) {
        throw std::invalid_argument("preset: table " + std::to_string(table) + " has no row " +
                                    std::to_string(row));
    }
    ExperimentSpec s;
    s.n_paths = std::uint64_t(1e7 * scale_n + 0.5);
    if (s.n_paths < 2) {
        throw std::invalid_argument("preset: scale_n too small, fewer than 2 paths");
    }
    s.D = 1.0;
    s.experiment_id = "table" + std::to_string(table) + "_row" + std::to_string(row);
    switch (table) {
        case 1:
            s.family = Family::PeriodicTerminal;
            s.epsilon = kTable1[row - 1].epsilon;
            s.delta = kTable1[row - 1].delta;
            s.environment = EnvironmentKind::Periodic;
            s.fast_potential = FastPotential::CosSin;
            s.slow_potential = SlowPotential::Quadratic;
            s.lambda = 6.283185307179586;
            s.mode = SimMode::FiniteHorizon;
            s.t0 = 0.0;
            s.T = 1.0;
            s.x0 = 0.05;
            s.subsolution = SubsolutionKind::TerminalQuadratic;
            // The periodic family tolerates a coarser step rule.
            s.dt_rule = {DtRule::ScaledTol, 0.01};
            break;
        case 2:
            s.family = Family::RandomExitNegDrift;
            s.epsilon = kTable2[row - 1].epsilon;
            s.delta = kTable2[row - 1].delta;
            s.environment = EnvironmentKind::Random;
            s.slow_potential = SlowPotential::Linear;
            s.variance = 1.0;
            s.corr_length_sq = 1.0;
            s.n_modes = 128;
            s.mode = SimMode::ExitFromInterval;
            s.x0 = 0.0;
            s.x_minus = -0.5;
            s.x_plus = 0.5;
            s.subsolution = SubsolutionKind::ExitLinear;
            s.dt_rule = {DtRule::ScaledTol, 0.001};
            break;
        case 3:
            s.family = Family::RandomExitRestPoint;
            s.epsilon = kTable3[row - 1].epsilon;
            s.delta = kTable3[row - 1].delta;
            s.environment = EnvironmentKind::Random;
            s.slow_potential = SlowPotential::Quadratic;
            s.variance = 1.0;
            s.corr_length_sq = 1.0;
            s.n_modes = 128;
            s.mode = SimMode::ExitFromInterval;
            s.x0 = 0.1;
            s.x_minus = 0.0;
            s.x_plus = 0.8;
            s.subsolution = SubsolutionKind::ExitRestPoint;
            s.dt_rule = {DtRule::ScaledTol, 0.001};
            break;
        default:
            throw std::invalid_argument("preset: unknown table " + std::to_string(table));
    }
    return s;
}

}  // namespace roughmc
