#include "roughmc/estimators.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace roughmc {

double payoff(const PayoffSpec& spec, const TrajectoryOutcome& outcome) {
    if (spec.mode == SimMode::ExitFromInterval) {
        return outcome.exited_at_plus ? 1.0 : 0.0;
    }
    return std::exp(-spec.h(outcome.terminal_x) / spec.epsilon);
}

double weighted_sample(const PayoffSpec& spec, const TrajectoryOutcome& outcome) {
    if (!outcome.valid || outcome.censored) {
        return 0.0;
    }
    if (spec.mode == SimMode::ExitFromInterval) {
        return outcome.exited_at_plus ? std::exp(outcome.log_weight) : 0.0;
    }
    return std::exp(-spec.h(outcome.terminal_x) / spec.epsilon + outcome.log_weight);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.n == 0) {
        censored += other.censored;
        invalid += other.invalid;
        return;
    }
    if (n == 0) {
        const auto c = censored + other.censored;
        const auto i = invalid + other.invalid;
        *this = other;
        censored = c;
        invalid = i;
        return;
    }
    const double total = double(n + other.n);
    const double delta = other.mean - mean;
    mean += delta * double(other.n) / total;
    m2 += other.m2 + delta * delta * double(n) * double(other.n) / total;
    n += other.n;
    censored += other.censored;
    invalid += other.invalid;
}

EstimatorSummary summarize(const MomentAccumulator& acc, double epsilon) {
    if (acc.n < 2) {
        throw std::invalid_argument("summarize: need at least 2 samples");
    }
    EstimatorSummary s;
    s.n = acc.n;
    s.mean = acc.mean;
    s.second_moment = acc.m2 / double(acc.n) + acc.mean * acc.mean;
    s.censored = acc.censored;
    s.invalid = acc.invalid;
    const double sample_sd = std::sqrt(acc.m2 / double(acc.n - 1));
    if (s.mean > 0.0) {
        s.re_per_sample = sample_sd / s.mean;
        s.re_of_mean = s.re_per_sample / std::sqrt(double(acc.n));
        s.neg_eps_log_mean = -epsilon * std::log(s.mean);
    } else {
        s.re_per_sample = kUndefinedRelError;
        s.re_of_mean = kUndefinedRelError;
        s.neg_eps_log_mean = std::numeric_limits<double>::infinity();
    }
    s.neg_eps_log_m2 = s.second_moment > 0.0 ? -epsilon * std::log(s.second_moment)
                                             : std::numeric_limits<double>::infinity();
    return s;
}

EstimatorSummary aggregate_values(std::span<const double> gammas, double epsilon) {
    MomentAccumulator acc;
    for (double g : gammas) {
        acc.add(g);
    }
    return summarize(acc, epsilon);
}

EstimatorSummary aggregate(std::span<const TrajectoryOutcome> outcomes, const PayoffSpec& payoff_spec,
                           double epsilon) {
    MomentAccumulator acc;
    for (const auto& o : outcomes) {
        acc.add(weighted_sample(payoff_spec, o));
        acc.censored += o.censored ? 1 : 0;
        acc.invalid += o.valid ? 0 : 1;
    }
    return summarize(acc, epsilon);
}

CrossCheckReport cross_check(const std::vector<std::string>& names,
                             const std::vector<EstimatorSummary>& summaries, int reference) {
    if (names.size() != summaries.size() || summaries.empty()) {
        throw std::invalid_argument("cross_check: names and summaries must match and be non-empty");
    }
    if (reference < 0 || std::size_t(reference) >= summaries.size()) {
        throw std::invalid_argument("cross_check: reference index out of range");
    }
    CrossCheckReport report;
    report.reference = reference;
    const double ref_mean = summaries[reference].mean;
    report.reference_fallback = !(ref_mean > 0.0);

    const auto sample_sd = [](const EstimatorSummary& s) {
        if (s.mean > 0.0 && s.re_per_sample >= 0.0) {
            return s.re_per_sample * s.mean;
        }
        const double var = (s.second_moment - s.mean * s.mean) * double(s.n) / double(s.n - 1);
        return std::sqrt(std::max(var, 0.0));
    };
    const double ref_se = sample_sd(summaries[reference]) / std::sqrt(double(summaries[reference].n));
    const double var0 = sample_sd(summaries[0]) * sample_sd(summaries[0]);

    for (std::size_t i = 0; i < summaries.size(); ++i) {
        CrossCheckRow row;
        row.name = names[i];
        row.summary = summaries[i];
        const double sd = sample_sd(summaries[i]);
        const double denom = report.reference_fallback ? summaries[i].mean : ref_mean;
        row.re_ref = denom > 0.0 ? sd / (denom * std::sqrt(double(summaries[i].n))) : kUndefinedRelError;
        const double se_i = sd / std::sqrt(double(summaries[i].n));
        const double joint = std::sqrt(se_i * se_i + ref_se * ref_se);
        row.z_vs_ref = (int(i) == reference || joint == 0.0)
                           ? 0.0
                           : std::abs(summaries[i].mean - ref_mean) / joint;
        row.var_reduction = sd > 0.0 ? var0 / (sd * sd) : std::numeric_limits<double>::infinity();
        report.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        for (std::size_t j = i + 1; j < summaries.size(); ++j) {
            const double se_i = sample_sd(summaries[i]) / std::sqrt(double(summaries[i].n));
            const double se_j = sample_sd(summaries[j]) / std::sqrt(double(summaries[j].n));
            const double joint = std::sqrt(se_i * se_i + se_j * se_j);
            report.pairwise.push_back(
                {int(i), int(j),
                 joint > 0.0 ? std::abs(summaries[i].mean - summaries[j].mean) / joint : 0.0});
        }
    }
    return report;
}

namespace {

std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fmt_sci(double x, int prec = 4) {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(prec);
    os << x;
    return os.str();
}

}  // namespace

std::string CrossCheckReport::render() const {
    std::ostringstream os;
    os << "estimator        n          mean        re_mean(ref)   -e*log(mean)  -e*log(m2)   "
          "var_vs_first   z_vs_ref\n";
    for (const auto& row : rows) {
        os << row.name;
        for (std::size_t pad = row.name.size(); pad < 12; ++pad) os << ' ';
        os << ' ' << row.summary.n << "  " << fmt_sci(row.summary.mean) << "  "
           << fmt_sci(row.re_ref) << "   " << fmt_sci(row.summary.neg_eps_log_mean) << "  "
           << fmt_sci(row.summary.neg_eps_log_m2) << "  " << fmt_sci(row.var_reduction) << "  "
           << fmt_sci(row.z_vs_ref);
        if (row.summary.censored > 0) os << "  censored=" << row.summary.censored;
        if (row.summary.invalid > 0) os << "  invalid=" << row.summary.invalid;
        os << '\n';
    }
    if (pairwise.size() > 1) {
        os << "pairwise |z|:";
        for (const auto& p : pairwise) {
            os << ' ' << rows[p.i].name << '/' << rows[p.j].name << '=' << fmt_sci(p.z, 2);
        }
        os << '\n';
    }
    if (reference_fallback) {
        os << "warning: reference mean non-positive; relative errors use each estimator's own mean\n";
    }
    return os.str();
}

const char* const kCsvHeader =
    "experiment_id,epsilon,delta,eps_over_delta,estimator,n,mean,second_moment,re_sample,re_mean,"
    "neg_eps_log_mean,neg_eps_log_m2,censored,wall_seconds,seed";

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const CsvRow& row) {
    out << row.experiment_id << ',' << fmt(row.epsilon) << ',' << fmt(row.delta) << ','
        << fmt(row.epsilon / row.delta) << ',' << row.estimator << ',' << row.summary.n << ','
        << fmt(row.summary.mean) << ',' << fmt(row.summary.second_moment) << ','
        << fmt(row.summary.re_per_sample) << ',' << fmt(row.summary.re_of_mean) << ','
        << fmt(row.summary.neg_eps_log_mean) << ',' << fmt(row.summary.neg_eps_log_m2) << ','
        << row.summary.censored << ',' << fmt(row.wall_seconds) << ',' << row.seed << '\n';
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("experiment_id,", 0) == 0) continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 15) {
            throw std::runtime_error("read_csv: expected 15 fields, got " +
                                     std::to_string(fields.size()));
        }
        CsvRow row;
        row.experiment_id = fields[0];
        row.epsilon = std::stod(fields[1]);
        row.delta = std::stod(fields[2]);
        row.estimator = fields[4];
        row.summary.n = std::stoull(fields[5]);
        row.summary.mean = std::stod(fields[6]);
        row.summary.second_moment = std::stod(fields[7]);
        row.summary.re_per_sample = std::stod(fields[8]);
        row.summary.re_of_mean = std::stod(fields[9]);
        row.summary.neg_eps_log_mean = std::stod(fields[10]);
        row.summary.neg_eps_log_m2 = std::stod(fields[11]);
        row.summary.censored = std::stoull(fields[12]);
        row.wall_seconds = std::stod(fields[13]);
        row.seed = std::stoull(fields[14]);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace roughmc
