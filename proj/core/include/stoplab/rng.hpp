#pragma once

#include <cstdint>
#include <random>

namespace stoplab {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Random stream for (seed, index), independent of every other index. Each
/// Monte Carlo trial draws from its own stream, so results do not depend on
/// how trials are scheduled.
Engine make_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [0, bound) by rejection; bound > 0. Portable across
/// standard libraries, unlike std::uniform_int_distribution.
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Engine& engine);

}  // namespace stoplab
