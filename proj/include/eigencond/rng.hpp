#pragma once

#include <cstdint>
#include <random>

namespace eigencond {

using Rng = std::mt19937_64;

/// splitmix64 mixing step; good avalanche, used for seed derivation.
std::uint64_t split_mix64(std::uint64_t x);

/// Counter-based substream derivation: independent stream per work unit.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t unit);

Rng make_rng(std::uint64_t seed);

}  // namespace eigencond
