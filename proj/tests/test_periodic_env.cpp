#include <cmath>
#include <string>

#include <doctest.h>

#include "oracles.hpp"
#include "roughmc/environment.hpp"
#include "roughmc/periodic_env.hpp"

using namespace roughmc;

namespace {

constexpr double kTwoPi = 6.283185307179586;

PeriodicModel cos_sin_model(double D = 1.0) {
    PeriodicModel m;
    m.Q = [](double y) { return std::cos(y) + std::sin(y); };
    m.Qprime = [](double y) { return -std::sin(y) + std::cos(y); };
    m.V = [](double x) { return 0.5 * x * x; };
    m.Vprime = [](double x) { return x; };
    m.lambda = kTwoPi;
    m.D = D;
    return m;
}

PeriodicModel flat_model() {
    PeriodicModel m;
    m.Q = [](double) { return 0.0; };
    m.Qprime = [](double) { return 0.0; };
    m.V = [](double) { return 0.0; };
    m.Vprime = [](double) { return 0.0; };
    m.lambda = kTwoPi;
    m.D = 0.7;
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("periodic_env");

TEST_CASE("cos+sin constants match the reported values") {
    const auto c = compute_constants(cos_sin_model(), 1024);
    CHECK(std::abs(c.Lhat - 9.83999) < 1e-4);
    CHECK(std::abs(c.kappa - 0.407728) < 1e-5);
    CHECK(c.q == doctest::Approx(2.0 * c.kappa));
    // L maps onto Lhat under y -> y + pi, checked by quadrature.
    CHECK(std::abs(c.L - c.Lhat) < 1e-9);
}

TEST_CASE("constant potential is exactly neutral") {
    const auto c = compute_constants(flat_model(), 64);
    CHECK(c.L == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(c.Lhat == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(c.kappa == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.q == doctest::Approx(2.0 * 0.7).epsilon(1e-12));
}

TEST_CASE("quadrature converges: doubling n_quad is inert for smooth Q") {
    const auto model = cos_sin_model();
    const auto a = compute_constants(model, 256);
    const auto b = compute_constants(model, 512);
    CHECK(std::abs(a.L - b.L) < 1e-10);
    CHECK(std::abs(a.Lhat - b.Lhat) < 1e-10);
}

TEST_CASE("Gibbs density integrates to one") {
    const auto model = cos_sin_model();
    const auto c = compute_constants(model, 1024);
    const double mass = oracles::trapezoid(
        [&](double y) { return std::exp(-model.Q(y) / model.D) / c.L; }, 0.0, model.lambda, 4096);
    CHECK(std::abs(mass - 1.0) < 1e-12);
}

TEST_CASE("corrector factor: closed form, flat case, Gibbs mean") {
    const auto model = cos_sin_model();
    const auto c = compute_constants(model, 2048);

    // Q == 0 -> factor 1 everywhere.
    const auto flat = flat_model();
    const auto cf = compute_constants(flat, 64);
    for (double y : {-3.0, 0.0, 1.7, 11.0}) {
        CHECK(corrector_factor(flat, cf, y) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Value at y = pi/4, where Q = sqrt(2); exponent checked independently.
    const double expected = (kTwoPi / c.Lhat) * std::exp(std::sqrt(2.0));
    CHECK(corrector_factor(model, c, kTwoPi / 8.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(expected - 2.6264) < 2e-3);

    // Gibbs mean of the corrector equals kappa (quadrature oracle), hence
    // consistent with q = 2 D kappa.
    const double gibbs_mean = oracles::trapezoid(
        [&](double y) {
            return corrector_factor(model, c, y) * std::exp(-model.Q(y) / model.D) / c.L;
        },
        0.0, model.lambda, 8192);
    CHECK(std::abs(gibbs_mean - c.kappa) < 1e-10);
    CHECK(c.q == doctest::Approx(2.0 * model.D * gibbs_mean).epsilon(1e-9));
}

TEST_CASE("effective drift") {
    const auto model = cos_sin_model();
    const auto c = compute_constants(model);
    CHECK(effective_drift(model, c, 1.0) == doctest::Approx(-c.kappa).epsilon(1e-12));
    CHECK(std::abs(effective_drift(model, c, 1.0) + 0.407728) < 1e-5);

    auto constant_v = model;
    constant_v.Vprime = [](double) { return 0.0; };
    for (double x : {-2.0, 0.0, 0.3}) {
        CHECK(effective_drift(constant_v, c, x) == 0.0);
    }

    auto linear_v = model;
    linear_v.Vprime = [](double) { return 1.0; };
    CHECK(effective_drift(linear_v, c, 123.0) == doctest::Approx(-c.kappa).epsilon(1e-12));
}

TEST_CASE("Hoelder inequality and kappa range over random trig potentials") {
    for (int trial = 0; trial < 20; ++trial) {
        const double a = 0.3 + 0.1 * trial;
        const double b = std::sin(3.7 * trial + 1.0);
        PeriodicModel m;
        m.Q = [a, b](double y) { return a * std::cos(y) + b * std::sin(2.0 * y); };
        m.Qprime = [a, b](double y) { return -a * std::sin(y) + 2.0 * b * std::cos(2.0 * y); };
        m.V = [](double x) { return x; };
        m.Vprime = [](double) { return 1.0; };
        m.lambda = kTwoPi;
        m.D = 0.5 + 0.05 * trial;
        const auto c = compute_constants(m, 512);
        CHECK(c.L * c.Lhat >= kTwoPi * kTwoPi - 1e-9);
        CHECK(c.kappa > 0.0);
        CHECK(c.kappa <= 1.0 + 1e-12);
        CHECK(c.q <= 2.0 * m.D + 1e-12);
    }
}

TEST_CASE("constant shift of Q cancels") {
    const auto model = cos_sin_model();
    const auto base = compute_constants(model, 512);
    auto shifted = model;
    shifted.Q = [&model](double y) { return model.Q(y) + 2.5; };
    const auto c = compute_constants(shifted, 512);
    CHECK(std::abs(c.kappa - base.kappa) < 1e-12);
    CHECK(std::abs(corrector_factor(shifted, c, 0.4) - corrector_factor(model, base, 0.4)) < 1e-12);
    CHECK(std::abs(effective_drift(shifted, c, 0.7) - effective_drift(model, base, 0.7)) < 1e-12);
}

TEST_CASE("errors: n_quad too small, integrand overflow") {
    CHECK_THROWS_AS(compute_constants(cos_sin_model(), 8), std::invalid_argument);

    PeriodicModel huge = cos_sin_model();
    huge.Q = [](double y) { return 1e6 * std::cos(y); };
    huge.Qprime = [](double y) { return -1e6 * std::sin(y); };
    huge.D = 1e-3;
    CHECK_THROWS_AS(compute_constants(huge, 64), std::domain_error);
    try {
        compute_constants(huge, 64);
    } catch (const std::domain_error& err) {
        CHECK(std::string(err.what()).find("node") != std::string::npos);
    }
}

TEST_CASE("model validation catches inconsistent derivatives") {
    CHECK_NOTHROW(validate_model(cos_sin_model()));
    auto broken = cos_sin_model();
    broken.Qprime = [](double y) { return std::cos(y); };
    CHECK_THROWS_AS(validate_model(broken), std::invalid_argument);
    auto aperiodic = cos_sin_model();
    aperiodic.lambda = 5.0;
    CHECK_THROWS_AS(validate_model(aperiodic), std::invalid_argument);
}

TEST_CASE("environment view agrees with module formulas") {
    const auto model = cos_sin_model();
    const auto c = compute_constants(model);
    const Environment env = make_environment(model, c);
    CHECK(env.corrector(0.9) == doctest::Approx(corrector_factor(model, c, 0.9)).epsilon(1e-14));
    CHECK(env.effective_drift(0.3) == doctest::Approx(effective_drift(model, c, 0.3)).epsilon(1e-14));
    CHECK(env.q() == doctest::Approx(c.q).epsilon(1e-14));
}

TEST_SUITE_END();
