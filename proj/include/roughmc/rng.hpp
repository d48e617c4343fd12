#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace roughmc {

// Philox4x32-10 counter-based generator. Every 128-bit counter block maps
// to 128 output bits under a 64-bit key, so draws are addressable as
// (key, stream, block): trajectories own disjoint streams and results do
// not depend on how work is split across threads.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 2> key,
                                              std::array<std::uint32_t, 4> ctr) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0],
                   std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1],
                   std::uint32_t(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// Stream identifiers. Trajectory streams are indexed by (estimator slot,
// trajectory number); auxiliary draws (field sampling) get reserved tags.
constexpr std::uint64_t kFieldStream = std::uint64_t(0xFE) << 48;

constexpr std::uint64_t trajectory_stream(int estimator_slot, std::uint64_t trajectory) {
    return (std::uint64_t(estimator_slot + 1) << 48) | trajectory;
}

// One logical random stream: uniforms and normals drawn sequentially from
// consecutive Philox blocks. Copyable; replay is exact given (key, stream).
class RngStream {
public:
    RngStream(std::uint64_t key, std::uint64_t stream)
        : key_{std::uint32_t(key), std::uint32_t(key >> 32)},
          stream_lo_(std::uint32_t(stream)),
          stream_hi_(std::uint32_t(stream >> 32)) {}

    // Two uint64 lanes per block.
    std::array<std::uint64_t, 2> next_block() {
        const std::array<std::uint32_t, 4> ctr = {std::uint32_t(block_), std::uint32_t(block_ >> 32),
                                                  stream_lo_, stream_hi_};
        ++block_;
        const auto out = Philox4x32::block(key_, ctr);
        return {std::uint64_t(out[0]) | (std::uint64_t(out[1]) << 32),
                std::uint64_t(out[2]) | (std::uint64_t(out[3]) << 32)};
    }

    // Uniform on (0, 1]: 53-bit mantissa, never exactly zero.
    double next_uniform() {
        if (!have_uniform_) {
            const auto b = next_block();
            pending_uniform_ = to_unit(b[1]);
            have_uniform_ = true;
            return to_unit(b[0]);
        }
        have_uniform_ = false;
        return pending_uniform_;
    }

    // Standard normal via Box-Muller (rejection-free, hence replayable with a
    // fixed draw count). Produces pairs; the spare is cached.
    double next_normal() {
        if (have_normal_) {
            have_normal_ = false;
            return pending_normal_;
        }
        const auto b = next_block();
        const double u1 = to_unit(b[0]);
        const double u2 = to_unit(b[1]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        pending_normal_ = radius * std::sin(angle);
        have_normal_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr double kPi = 3.14159265358979323846;

    static double to_unit(std::uint64_t x) {
        return double((x >> 11) + 1) * 0x1.0p-53;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_ = 0;
    bool have_uniform_ = false;
    bool have_normal_ = false;
    double pending_uniform_ = 0.0;
    double pending_normal_ = 0.0;
};

}  // namespace roughmc
