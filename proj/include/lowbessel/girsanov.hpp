#pragma once

// Exponential (Novikov) weights for bounded path-dependent drifts and the
// reweighted estimators built on them.

#include "lowbessel/core.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lowbessel {

/// N_t = exp(sum_{t_i < t} Gamma_i dW_i - 1/2 Gamma_i^2 dt_i), Gamma_i evaluated
/// on the path stopped at t_i. Requires Gamma.bounded_by and stored increments.
SamplePath novikov_weight(const SamplePath& x, const PathFunctional& gamma);

/// log N_T only (same grid sum as novikov_weight).
double novikov_log_weight(const SamplePath& x, const PathFunctional& gamma);

using PathObservable = std::function<double(const SamplePath&)>;

struct ReweightedEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    /// Kish effective sample size (sum w)^2 / sum w^2.
    double ess = 0.0;
    std::size_t n = 0;
    bool degenerate = false;  // ess below 10% of n
    std::vector<std::string> warnings;
};

/// sum_k w_k phi(X^k) / n with its standard error.
ReweightedEstimate reweighted_expectation(std::span<const double> terminal_weights,
                                          std::span<const double> observations);

ReweightedEstimate reweighted_expectation(std::span<const SamplePath> paths,
                                          std::span<const double> terminal_weights,
                                          const PathObservable& phi);

}  // namespace lowbessel
