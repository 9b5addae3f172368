#pragma once

// Samplers for the squared Bessel process BESQ^delta and its square root,
// Euler-type schemes with a path-dependent drift, the reflected Brownian
// motion of the delta = 1 case, and path transforms.

#include "lowbessel/core.hpp"
#include "lowbessel/kernels.hpp"
#include "lowbessel/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lowbessel {

/// Zero-detection threshold for exactly sampled paths.
inline constexpr double kZeroTolerance = 1e-12;

/// One exact BESQ^delta transition over `dt` from `s`: the scaled
/// noncentral chi-square 2 dt * Gamma(delta/2 + N), N ~ Poisson(s / (2 dt)).
/// Returns exactly 0 when delta = 0 and N = 0.
double besq_exact_transition(Engine& rng, double s, double delta, double dt);

/// Markov chain of exact BESQ^delta(s0) transitions on `grid`.
SamplePath sample_besq_exact(double s0, Dimension delta, const TimeGrid& grid, std::uint64_t seed);

/// Gaussian increments N(0, dt_i) for `grid` drawn from the path's Brownian stream.
std::vector<double> brownian_increments(const TimeGrid& grid, std::uint64_t seed);

/// Euler scheme for dS = drift_bar(t, S^t) dt + 2 sqrt(S) dW with the
/// variant's boundary treatment. `drift_bar` is the full drift of the
/// squared process (it already contains +delta). Stores the increments.
SamplePath euler_besq(double s0, const PathFunctional& drift_bar, const TimeGrid& grid,
                      std::uint64_t seed,
                      SchemeVariant variant = SchemeVariant::euler_full_truncation);

/// Same scheme driven by caller-supplied increments (coupling studies).
SamplePath euler_besq(double s0, const PathFunctional& drift_bar, const TimeGrid& grid,
                      std::span<const double> increments, SchemeVariant variant,
                      std::uint64_t seed = 0);

/// Steps several paths together so the update runs through the vector
/// kernel. `increments[k]` drives path k. Result k equals
/// euler_besq(s0, drift_bar, grid, increments[k], variant) bit for bit.
std::vector<SamplePath> euler_besq_batch(double s0, const PathFunctional& drift_bar,
                                         const TimeGrid& grid,
                                         std::span<const std::vector<double>> increments,
                                         SchemeVariant variant);

/// Pointwise square root; throws std::domain_error on negative values.
SamplePath sqrt_path(const SamplePath& s);

struct ReflectedPath {
    SamplePath x;            // x0 + W + L >= 0
    SamplePath local_time;   // L, nondecreasing
};

/// Skorokhod reflection of x0 + W at 0 on the grid:
/// L_t = max(0, sup_{s<=t} -(x0 + W_s)).
ReflectedPath reflected_bm(double x0, const TimeGrid& grid, std::uint64_t seed);
ReflectedPath reflected_bm(double x0, const TimeGrid& grid, std::span<const double> increments);

/// Negates values strictly after the first node with value <= kZeroTolerance.
SamplePath sign_flip_after_zero(const SamplePath& x);

/// Negates values at nodes > `last_unflipped`.
SamplePath sign_flip_after(const SamplePath& x, std::size_t last_unflipped);

/// First zero of a BES^delta path sampled exactly on a grid, detected
/// between nodes through the Bessel bridge: given X_i = a, X_{i+1} = b the
/// bridge avoids 0 with probability I_{|nu|}(ab/dt) / I_{-|nu|}(ab/dt),
/// nu = delta/2 - 1. Returns the index i such that 0 is reached in
/// (t_i, t_{i+1}] (or X_i = 0), or nothing.
std::optional<std::size_t> first_zero_bridge(const SamplePath& x, Dimension delta,
                                             std::uint64_t seed);

/// Euler scheme for dY = sigma_0(Y) dW (Lamperti-transformed driftless SDE).
SamplePath lamperti_sde(double y0, Dimension delta, const TimeGrid& grid, std::uint64_t seed);

}  // namespace lowbessel
