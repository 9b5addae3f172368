#pragma once

// Path-dependent Bessel processes: X = sqrt(S) where S solves
//   S_t = x0^2 + delta t + int 2 sqrt|S| dW + int 2 sqrt|S| Gamma(s, sqrt|S^s|) ds,
// checks of the growth and Lipschitz assumptions on Gamma, coupling
// evidence for pathwise uniqueness and the integer-dimension radial oracle.

#include "lowbessel/core.hpp"
#include "lowbessel/kernels.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lowbessel {

SamplePath solve_pathdep_bessel(double x0, Dimension delta, const PathFunctional& gamma,
                                const TimeGrid& grid, std::uint64_t seed,
                                SchemeVariant variant = SchemeVariant::euler_full_truncation);

SamplePath solve_pathdep_bessel(double x0, Dimension delta, const PathFunctional& gamma,
                                const TimeGrid& grid, std::span<const double> increments,
                                SchemeVariant variant = SchemeVariant::euler_full_truncation);

/// Gamma(s, eta) = min(sup_{r<=s} sqrt|eta(r)|, k).
PathFunctional clipped_running_sup(double k);

/// Gamma(s, xi) = c xi(s) / (1 + xi(s)^2) * (1 + sin(int_0^s xi^2 dr) / 2).
/// Bounded by 3|c|/4 and the induced squared drift is Lipschitz with K = 3|c|.
PathFunctional saturating_feedback(double c);

struct AssumptionReport {
    std::size_t n_samples = 0;
    /// max |Gamma(s, eta)| / (1 + sup sqrt|eta|) over sampled X-paths.
    double observed_growth = 0.0;
    /// max |bar Gamma(s, eta)| / (1 + sup |eta|) over sampled S-paths.
    double observed_bar_growth = 0.0;
    /// max |bar Gamma(s, a) - bar Gamma(s, b)| / (|a(s) - b(s)| + int |a - b|).
    double observed_lipschitz = 0.0;
    double observed_bound = 0.0;  // max |Gamma|
    std::optional<double> declared_growth;
    std::optional<double> declared_bar_growth;
    std::optional<double> declared_lipschitz;
    std::optional<double> declared_bound;
    bool growth_violated = false;
    bool bar_growth_violated = false;
    bool lipschitz_violated = false;
    bool bound_violated = false;

    [[nodiscard]] bool any_violation() const {
        return growth_violated || bar_growth_violated || lipschitz_violated || bound_violated;
    }
};

/// Samples random path pairs (smooth, rough and mixed) and compares the
/// empirical constants with the metadata declared on `gamma`. Report only.
AssumptionReport probe_assumptions(const PathFunctional& gamma, Dimension delta,
                                   std::size_t n_samples, std::uint64_t seed,
                                   std::size_t n_steps = 64);

/// sup_t |S^A_t - S^B_t| for the squared processes of two schemes driven
/// by the same increments.
double coupling_distance(double x0, Dimension delta, const PathFunctional& gamma,
                         const TimeGrid& grid, std::span<const double> increments,
                         SchemeVariant a, SchemeVariant b);

double coupling_distance(double x0, Dimension delta, const PathFunctional& gamma,
                         const TimeGrid& grid, std::uint64_t seed, SchemeVariant a,
                         SchemeVariant b);

struct CouplingLevel {
    std::size_t n_steps = 0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double q90 = 0.0;
    double mean = 0.0;
};

struct CouplingStudy {
    std::vector<CouplingLevel> levels;  // coarse to fine
    bool median_decreasing = false;     // strictly, level to level
};

/// Refinement study: level l uses base_steps * 2^l steps. Each path's noise
/// is drawn on the finest grid and summed onto the coarser ones, so all
/// levels see the same Brownian path.
CouplingStudy coupling_study(double x0, Dimension delta, const PathFunctional& gamma,
                             double horizon, std::size_t base_steps, std::size_t doublings,
                             std::size_t n_paths, std::uint64_t seed, SchemeVariant a,
                             SchemeVariant b, std::size_t threads = 1);

/// Norm of the delta-dimensional Euler scheme
///   dY = dbeta + Gamma(t, |Y|^t) Y/|Y| dt,  Y_0 = (x0, 0, ...).
/// delta must be 2 or 3 and Gamma bounded. At |Y| = 0 the direction is
/// replaced by 0 for that step.
SamplePath radial_bessel_oracle(int delta, double x0, const PathFunctional& gamma,
                                const TimeGrid& grid, std::uint64_t seed);

struct SupMoments {
    double m3 = 0.0;  // E sup_t |X_t|^3
    double m6 = 0.0;
    double m3_std_error = 0.0;
    double m6_std_error = 0.0;
    std::vector<std::string> warnings;
};

/// Ensemble monitor of E sup|X|^m, m = 3 and 6; warns on non-finite values
/// or heavy-tail symptoms (relative standard error above 1/2).
SupMoments sup_moments(std::span<const SamplePath> paths);

}  // namespace lowbessel
