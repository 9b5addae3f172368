#pragma once

// Ensemble statistics: compensated means, standard errors and
// Kolmogorov-Smirnov distances (atom-aware).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lowbessel {

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // standard error of the mean
    double stddev = 0.0;
    std::size_t n = 0;
};

MeanEstimate estimate_mean(std::span<const double> x);

/// z-score of mean(x) against `target`; 0 when x has zero variance and the
/// mean equals the target, +-inf when it does not.
double z_score(const MeanEstimate& m, double target = 0.0);

/// Left and right limits F(y-) and F(y) of a distribution function.
struct CdfPoint {
    double left = 0.0;
    double right = 0.0;
};

/// Evaluates a CDF at strictly increasing points.
using BatchCdf = std::function<std::vector<CdfPoint>(std::span<const double>)>;

/// sup_y |F_n(y) - F(y)| including left limits, so distributions with
/// atoms (e.g. mass at 0) are handled exactly.
double ks_one_sample(std::span<const double> samples, const BatchCdf& cdf);

/// Convenience overload for a continuous CDF.
double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);

/// sup_y |F_a(y) - F_b(y)|, ties handled.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical value c(alpha)/sqrt(n), c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_one_sample(std::size_t n, double alpha);
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha);

}  // namespace lowbessel
