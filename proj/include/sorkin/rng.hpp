#ifndef SORKIN_RNG_HPP
#define SORKIN_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "sorkin/errors.hpp"

namespace sorkin {

// Counter-based random streams (Philox4x64-10). A value is a pure function
// of (seed, stream_id, counter), so any pulse of any run can be generated
// independently on any worker, in any order, with identical results.

namespace philox {

inline constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t M1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ull; // golden ratio
inline constexpr std::uint64_t W1 = 0xBB67AE8584CAA73Bull; // sqrt(3)-1

inline void round_once(std::array<std::uint64_t, 4>& ctr,
                       const std::array<std::uint64_t, 2>& key) {
    const unsigned __int128 p0 = static_cast<unsigned __int128>(M0) * ctr[0];
    const unsigned __int128 p1 = static_cast<unsigned __int128>(M1) * ctr[2];
    const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
    const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
    const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

// 10-round block function, bit-compatible with the reference generator.
inline std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                          std::array<std::uint64_t, 2> key) {
    round_once(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += W0;
        key[1] += W1;
        round_once(ctr, key);
    }
    return ctr;
}

} // namespace philox

struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t counter = 0;

    // One block per counter position; each logical draw consumes exactly one.
    std::array<std::uint64_t, 4> next_block() {
        const std::array<std::uint64_t, 4> ctr{counter++, 0, 0, 0};
        return philox::block(ctr, {seed, stream_id});
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_uniform() {
        return double(next_block()[0] >> 11) * 0x1.0p-53;
    }

    // Standard normal via the Box-Muller cosine branch. First word mapped
    // into (0,1] so the log is always finite.
    double next_normal() {
        const auto w = next_block();
        const double u1 = double((w[0] >> 11) + 1) * 0x1.0p-53;
        const double u2 = double(w[1] >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
};

inline double normal_draw(RandomStream& rng) { return rng.next_normal(); }

// Stream ids are packed as (run << 43) | (config << 40) | pulse, giving
// every pulse of every configuration of every run its own stream. Pulse
// index 2^40-1 is reserved for run-level draws.
inline constexpr std::uint64_t max_pulses_per_stream = (1ull << 40) - 1;

inline std::uint64_t compose_stream_id(std::uint32_t run, int config_index,
                                       std::uint64_t pulse) {
    if (pulse > max_pulses_per_stream)
        throw ConfigError("pulse index exceeds the stream id space");
    if (run >= (1u << 21))
        throw ConfigError("run index exceeds the stream id space");
    return (std::uint64_t(run) << 43) | (std::uint64_t(config_index) << 40) | pulse;
}

inline std::uint64_t run_level_stream_id(std::uint32_t run, int config_index) {
    return compose_stream_id(run, config_index, max_pulses_per_stream);
}

} // namespace sorkin

#endif
