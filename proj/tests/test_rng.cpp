#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "roughmc/rng.hpp"

using namespace roughmc;

TEST_SUITE_BEGIN("rng");

// Known-answer vectors for philox4x32-10 (Salmon et al. reference vectors).
TEST_CASE("philox known answers") {
    {
        const auto out = Philox4x32::block({0, 0}, {0, 0, 0, 0});
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu},
                                           {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const auto out = Philox4x32::block({0xa4093822u, 0x299f31d0u},
                                           {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
}

TEST_CASE("uniforms live in (0, 1] and replay exactly") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.next_uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        CHECK(u == b.next_uniform());
    }
}

TEST_CASE("normal moments") {
    RngStream rng(123, 1);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_normal();
        sum += z;
        sum2 += z * z;
        sum3 += z * z * z;
        sum4 += z * z * z * z;
    }
    const double inv = 1.0 / n;
    CHECK(std::abs(sum * inv) < 3.0 / std::sqrt(double(n)));
    CHECK(std::abs(sum2 * inv - 1.0) < 3.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(sum3 * inv) < 3.0 * std::sqrt(15.0 / n));
    CHECK(std::abs(sum4 * inv - 3.0) < 3.0 * std::sqrt(96.0 / n));
}

TEST_CASE("distinct streams differ, same stream matches") {
    RngStream a(9, trajectory_stream(0, 5));
    RngStream b(9, trajectory_stream(0, 6));
    RngStream c(9, trajectory_stream(1, 5));
    RngStream a2(9, trajectory_stream(0, 5));
    int equal_ab = 0, equal_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const double va = a.next_normal();
        if (va == b.next_normal()) ++equal_ab;
        if (va == c.next_normal()) ++equal_ac;
        CHECK(va == a2.next_normal());
    }
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
}

TEST_CASE("correlation across streams is at noise level") {
    const int n = 20000;
    double cross = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream a(2024, trajectory_stream(0, std::uint64_t(i)));
        RngStream b(2024, trajectory_stream(1, std::uint64_t(i)));
        cross += a.next_normal() * b.next_normal();
    }
    CHECK(std::abs(cross / n) < 3.0 / std::sqrt(double(n)));
}

TEST_SUITE_END();
