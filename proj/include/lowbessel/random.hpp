#pragma once

// Seed derivation and per-path random streams. Every path in an ensemble
// gets its own engine seeded from (master seed, path index, stream tag), so
// results do not depend on how work is split across threads.

#include <cstdint>
#include <random>
#include <span>

namespace lowbessel {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent named sub-streams of one path.
enum class Stream : std::uint64_t {
    brownian = 1,
    exact_transition = 2,
    bridge = 3,
    radial = 4,
    probe = 5,
    ensemble_b = 6,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    Stream stream = Stream::brownian) {
    return mix64(mix64(master ^ mix64(index)) + static_cast<std::uint64_t>(stream));
}

using Engine = std::mt19937_64;

/// Brownian increments dW_i ~ N(0, dt_i) for the given step sizes.
void fill_brownian(Engine& rng, std::span<const double> step_sizes, std::span<double> out);

/// Sums consecutive blocks of `factor` increments (a Brownian path observed
/// on a coarser nested grid).
void coarsen_increments(std::span<const double> fine, std::size_t factor, std::span<double> out);

}  // namespace lowbessel
