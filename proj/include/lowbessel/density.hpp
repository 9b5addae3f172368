#pragma once

// Special functions and Bessel-process transition laws: Gamma, the modified
// Bessel function I_nu, the BES^delta transition density from x0, its
// distribution function, and the weighted occupation integral
//   x^{1-delta} * int_0^T p_t(x) dt
// together with its closed-form limit for a start at the origin.

#include "lowbessel/core.hpp"
#include "lowbessel/stats.hpp"

#include <span>
#include <vector>

namespace lowbessel {

/// Gamma function (Lanczos, g = 7, 9 terms; reflection below 1/2).
double gamma_fn(double a);
/// 1/Gamma(a), exactly 0 at the poles a = 0, -1, -2, ...
double reciprocal_gamma(double a);

/// Supported order range for `bessel_I`.
inline constexpr double kBesselNuMin = -1.0;
inline constexpr double kBesselNuMax = 2.0;
/// Switch from the power series to the large-argument expansion.
inline constexpr double kBesselCrossover = 20.0;

/// Modified Bessel function of the first kind I_nu(z), z >= 0.
double bessel_I(double nu, double z);
/// e^{-z} I_nu(z); finite for all z >= 0 (except nu < 0 non-integer at 0).
double bessel_I_scaled(double nu, double z);

namespace detail {
double bessel_I_series_scaled(double nu, double z);
double bessel_I_asymptotic_scaled(double nu, double z);
}  // namespace detail

/// Identifies the law of X_t for X = BES^delta started at x0.
struct DensitySpec {
    Dimension delta;
    double x0;
    double t;

    DensitySpec(Dimension d, double x0_, double t_);
    [[nodiscard]] double nu() const { return delta.nu(); }
};

/// Continuous part of the density of X_t at y >= 0. For delta = 0 the law
/// also has an atom at 0 (see `bes_atom_at_zero`).
double bes_density(const DensitySpec& spec, double y);

/// P(X_t = 0): exp(-x0^2 / (2t)) when delta = 0, otherwise 0.
double bes_atom_at_zero(const DensitySpec& spec);

/// F(y-) and F(y) at strictly increasing points, by Gauss-Legendre
/// quadrature of `bes_density` between consecutive points.
std::vector<CdfPoint> bes_cdf(const DensitySpec& spec, std::span<const double> sorted_points);
double bes_cdf(const DensitySpec& spec, double y);

/// Integral of the continuous part over [0, inf) (should equal 1 - atom).
double bes_total_mass(const DensitySpec& spec);

/// x^{1-delta} * int_0^T p_t(x) dt for X_0 = x0. Throws std::runtime_error
/// when the adaptive quadrature does not reach its tolerance.
double weighted_time_integral(Dimension delta, double x0, double horizon, double x);

/// Closed-form limit of `weighted_time_integral` as x -> 0+ for x0 = 0:
/// 2^{2-delta/2} / Gamma(delta/2) * t^{1-delta/2} / (2 - delta).
double origin_occupation_limit(Dimension delta, double t);

}  // namespace lowbessel
