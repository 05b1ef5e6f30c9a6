#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace samgp {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

// Stable 64-bit hash of a string (FNV-1a followed by mix64).
[[nodiscard]] std::uint64_t hash_string(std::string_view s) noexcept;

// Seed for an independent substream identified by (seed, tags...). Used so that every
// per-individual / per-generation task owns its own stream regardless of schedule.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept;

[[nodiscard]] inline Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags)
{
    return Rng{derive_seed(seed, tags)};
}

// Uniform draw on the closed interval [-half_width, +half_width]. A zero width yields +0.
[[nodiscard]] inline double symmetric_uniform(Rng& rng, double half_width)
{
    return std::uniform_real_distribution<double>(-half_width, half_width)(rng);
}

// Stream tags.
namespace stream {
inline constexpr std::uint64_t init = 0x1;
inline constexpr std::uint64_t split = 0x2;
inline constexpr std::uint64_t sam_in_noise = 0x3;
inline constexpr std::uint64_t sharpness = 0x4;
inline constexpr std::uint64_t offspring = 0x5;
inline constexpr std::uint64_t synthetic = 0x6;
} // namespace stream

} // namespace samgp
