#include "roughmc/random_env.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace roughmc {

double FieldRealization::value(double y) const {
    double sum = 0.0;
    const std::size_t m = frequencies.size();
    for (std::size_t j = 0; j < m; ++j) {
        sum += cos_amps[j] * std::cos(frequencies[j] * y) + sin_amps[j] * std::sin(frequencies[j] * y);
    }
    return scale * sum;
}

double FieldRealization::derivative(double y) const {
    double sum = 0.0;
    const std::size_t m = frequencies.size();
    for (std::size_t j = 0; j < m; ++j) {
        const double w = frequencies[j];
        sum += w * (-cos_amps[j] * std::sin(w * y) + sin_amps[j] * std::cos(w * y));
    }
    return scale * sum;
}

FieldRealization sample_field(const GaussianFieldSpec& spec, RngStream& rng) {
    if (spec.n_modes < 1 || !(spec.variance >= 0.0) || !(spec.corr_length_sq > 0.0)) {
        throw std::invalid_argument("sample_field: invalid GaussianFieldSpec");
    }
    FieldRealization field;
    const int m = spec.n_modes;
    field.frequencies.resize(m);
    field.cos_amps.resize(m);
    field.sin_amps.resize(m);
    // E[cos(w r)] under w ~ N(0, 2/l^2) equals exp(-r^2/l^2).
    const double freq_sd = std::sqrt(2.0 / spec.corr_length_sq);
    for (int j = 0; j < m; ++j) {
        field.frequencies[j] = freq_sd * rng.next_normal();
        field.cos_amps[j] = rng.next_normal();
        field.sin_amps[j] = rng.next_normal();
    }
    field.scale = std::sqrt(spec.variance / m);
    return field;
}

FieldRealization sample_field(const GaussianFieldSpec& spec) {
    RngStream rng(spec.seed, kFieldStream);
    return sample_field(spec, rng);
}

RandomHomogenized homogenized_constants(const GaussianFieldSpec& spec, double D) {
    if (!(D > 0.0)) {
        throw std::invalid_argument("homogenized_constants: D must be positive");
    }
    RandomHomogenized c;
    // Lognormal moment: E exp(±Z/D) = exp(v/(2 D^2)) for Z ~ N(0, v).
    c.K = std::exp(spec.variance / (2.0 * D * D));
    c.Khat = c.K;
    c.kappa = 1.0 / (c.K * c.Khat);
    c.q = 2.0 * D * c.kappa;
    return c;
}

double random_corrector_factor(const FieldRealization& field, const RandomHomogenized& consts,
                               double D, double y) {
    return std::exp(field.value(y) / D) / consts.Khat;
}

namespace {

void write_full(std::ostream& out, double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.write(buf, res.ptr - buf);
}

}  // namespace

void save_field(std::ostream& out, const FieldRealization& field) {
    out << field.frequencies.size() << '\n';
    for (std::size_t j = 0; j < field.frequencies.size(); ++j) {
        write_full(out, field.frequencies[j]);
        out << ' ';
        write_full(out, field.cos_amps[j]);
        out << ' ';
        write_full(out, field.sin_amps[j]);
        out << '\n';
    }
}

FieldRealization load_field(std::istream& in, double variance) {
    std::size_t m = 0;
    if (!(in >> m) || m == 0) {
        throw std::runtime_error("load_field: bad or empty field record");
    }
    FieldRealization field;
    field.frequencies.resize(m);
    field.cos_amps.resize(m);
    field.sin_amps.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (!(in >> field.frequencies[j] >> field.cos_amps[j] >> field.sin_amps[j])) {
            throw std::runtime_error("load_field: truncated field record at mode " + std::to_string(j));
        }
    }
    field.scale = std::sqrt(variance / double(m));
    return field;
}

TabulatedField::TabulatedField(FieldRealization field, double y_lo, double y_hi, double dy)
    : field_(std::move(field)), y_lo_(y_lo), dy_(dy) {
    if (!(y_hi > y_lo) || !(dy > 0.0)) {
        throw std::invalid_argument("TabulatedField: need y_hi > y_lo and dy > 0");
    }
    const std::size_t n = std::size_t(std::ceil((y_hi - y_lo) / dy)) + 2;
    q_.resize(n);
    qp_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = y_lo_ + double(i) * dy_;
        q_[i] = field_.value(y);
        qp_[i] = field_.derivative(y);
    }
}

double TabulatedField::value(double y) const {
    const double pos = (y - y_lo_) / dy_;
    if (pos < 0.0 || pos >= double(q_.size() - 1)) {
        return field_.value(y);
    }
    const std::size_t i = std::size_t(pos);
    const double s = pos - double(i);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * q_[i] + h10 * dy_ * qp_[i] + h01 * q_[i + 1] + h11 * dy_ * qp_[i + 1];
}

double TabulatedField::derivative(double y) const {
    const double pos = (y - y_lo_) / dy_;
    if (pos < 0.0 || pos >= double(q_.size() - 1)) {
        return field_.derivative(y);
    }
    const std::size_t i = std::size_t(pos);
    const double s = pos - double(i);
    const double s2 = s * s;
    const double d00 = 6.0 * s2 - 6.0 * s;
    const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double d01 = -6.0 * s2 + 6.0 * s;
    const double d11 = 3.0 * s2 - 2.0 * s;
    return (d00 * q_[i] + d10 * dy_ * qp_[i] + d01 * q_[i + 1] + d11 * dy_ * qp_[i + 1]) / dy_;
}

}  // namespace roughmc
