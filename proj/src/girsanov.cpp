#include "lowbessel/girsanov.hpp"

#include "lowbessel/kernels.hpp"
#include "lowbessel/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace lowbessel {

namespace {

void check_inputs(const SamplePath& x, const PathFunctional& gamma) {
    if (!gamma.bounded_by)
        throw std::domain_error("novikov_weight: Gamma must declare a bound (Novikov not verified)");
    if (!x.has_noise()) throw std::invalid_argument("novikov_weight: path carries no increments");
}

}  // namespace

SamplePath novikov_weight(const SamplePath& x, const PathFunctional& gamma) {
    check_inputs(x, gamma);
    const std::size_t n = x.grid.n_steps();
    std::vector<double> w(n + 1);
    double log_w = 0.0;
    w[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = gamma(PathView::stopped(x, i));
        log_w += g * x.noise[i] - 0.5 * g * g * x.grid.dt(i);
        w[i + 1] = std::exp(log_w);
    }
    return SamplePath(x.grid, std::move(w), {}, x.seed);
}

double novikov_log_weight(const SamplePath& x, const PathFunctional& gamma) {
    check_inputs(x, gamma);
    double log_w = 0.0;
    for (std::size_t i = 0; i < x.grid.n_steps(); ++i) {
        const double g = gamma(PathView::stopped(x, i));
        log_w += g * x.noise[i] - 0.5 * g * g * x.grid.dt(i);
    }
    return log_w;
}

ReweightedEstimate reweighted_expectation(std::span<const double> terminal_weights,
                                          std::span<const double> observations) {
    if (terminal_weights.size() != observations.size() || terminal_weights.empty())
        throw std::invalid_argument("reweighted_expectation: need matching non-empty inputs");
    const std::size_t n = observations.size();
    std::vector<double> prod(n);
    for (std::size_t k = 0; k < n; ++k) prod[k] = terminal_weights[k] * observations[k];
    const auto est = estimate_mean(prod);
    const auto mw = kernels::compensated_moments(terminal_weights);

    ReweightedEstimate r;
    r.estimate = est.mean;
    r.std_error = est.std_error;
    r.n = n;
    r.ess = mw.sum_sq > 0.0 ? mw.sum * mw.sum / mw.sum_sq : 0.0;
    if (r.ess < 0.1 * static_cast<double>(n)) {
        r.degenerate = true;
        r.warnings.push_back("effective sample size below 10% of the ensemble");
    }
    return r;
}

ReweightedEstimate reweighted_expectation(std::span<const SamplePath> paths,
                                          std::span<const double> terminal_weights,
                                          const PathObservable& phi) {
    std::vector<double> obs(paths.size());
    for (std::size_t k = 0; k < paths.size(); ++k) obs[k] = phi(paths[k]);
    return reweighted_expectation(terminal_weights, obs);
}

}  // namespace lowbessel
