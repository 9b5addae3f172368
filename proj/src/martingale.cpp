#include "lowbessel/martingale.hpp"

#include "lowbessel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lowbessel {

namespace {

void require_usable(const TestFunction& f) {
    if (f.membership == Membership::rejected)
        throw std::domain_error("compute_Mf: " + f.label + " is not in the domain of L");
}

}  // namespace

SamplePath compute_Mf(const SamplePath& x, const TestFunction& f, Dimension delta,
                      const PathFunctional& gamma) {
    require_usable(f);
    const std::size_t n = x.grid.n_steps();
    std::vector<double> m(n + 1);
    const double f0 = f.f(x.values[0]);
    double integral = 0.0;
    m[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x.values[i];
        double rate = apply_L(f, delta, xi);
        const double g = gamma(PathView::stopped(x, i));
        if (g != 0.0) rate += f.f1(xi) * g;
        integral += rate * x.grid.dt(i);
        m[i + 1] = f.f(x.values[i + 1]) - f0 - integral;
    }
    return SamplePath(x.grid, std::move(m), {}, x.seed);
}

SamplePath compute_Mf(const SamplePath& x, const TestFunction& f, Dimension delta) {
    return compute_Mf(x, f, delta, PathFunctional::zero());
}

SamplePath strong_residual(const SamplePath& x, const TestFunction& f, Dimension delta,
                           const PathFunctional& gamma) {
    if (!x.has_noise())
        throw std::invalid_argument("strong_residual: path carries no Brownian increments");
    SamplePath r = compute_Mf(x, f, delta, gamma);
    double stochastic = 0.0;
    for (std::size_t i = 0; i < x.grid.n_steps(); ++i) {
        stochastic += f.f1(x.values[i]) * x.noise[i];
        r.values[i + 1] -= stochastic;
    }
    return r;
}

std::string_view to_string(AdaptedStatistic s) {
    switch (s) {
        case AdaptedStatistic::one: return "1";
        case AdaptedStatistic::value: return "X_s";
        case AdaptedStatistic::value_squared: return "X_s^2";
        case AdaptedStatistic::running_max: return "max_{r<=s} X_r";
    }
    return "?";
}

MartingaleConfig MartingaleConfig::quartiles(double horizon) {
    MartingaleConfig c;
    c.checkpoints = {0.0, 0.25 * horizon, 0.5 * horizon, 0.75 * horizon, horizon};
    return c;
}

MartingaleAccumulator::MartingaleAccumulator(std::size_t n_paths, const TimeGrid& grid,
                                             MartingaleConfig config)
    : config_(std::move(config)), n_paths_(n_paths) {
    if (config_.checkpoints.empty()) config_.checkpoints = MartingaleConfig::quartiles(grid.horizon()).checkpoints;
    if (config_.checkpoints.size() < 2)
        throw std::invalid_argument("MartingaleConfig: need at least two checkpoints");
    for (double t : config_.checkpoints) checkpoint_index_.push_back(grid.index_at_or_before(t));
    for (std::size_t k = 1; k < checkpoint_index_.size(); ++k)
        if (checkpoint_index_[k] <= checkpoint_index_[k - 1])
            throw std::invalid_argument("MartingaleConfig: checkpoints must map to increasing nodes");
    n_pairs_ = checkpoint_index_.size() - 1;
    products_.assign(n_pairs_ * kDefaultBasket.size(), std::vector<double>(n_paths_));
}

void MartingaleAccumulator::record(std::size_t slot, const SamplePath& m, const SamplePath& x) {
    if (slot >= n_paths_) throw std::out_of_range("MartingaleAccumulator: slot out of range");
    double running_max = x.values[0];
    std::size_t scanned = 0;
    for (std::size_t p = 0; p < n_pairs_; ++p) {
        const std::size_t s = checkpoint_index_[p];
        const std::size_t t = checkpoint_index_[p + 1];
        for (; scanned <= s; ++scanned) running_max = std::max(running_max, x.values[scanned]);
        const double dm = m.values[t] - m.values[s];
        const double xs = x.values[s];
        const std::array<double, 4> g = {1.0, xs, xs * xs, running_max};
        for (std::size_t j = 0; j < g.size(); ++j) products_[p * g.size() + j][slot] = dm * g[j];
    }
}

MartingaleReport MartingaleAccumulator::report() const {
    MartingaleReport r;
    r.checkpoints = config_.checkpoints;
    r.n_paths = n_paths_;
    r.z_threshold = config_.z_threshold;
    const double per_test = std::erfc(config_.z_threshold / std::sqrt(2.0));
    r.confidence = std::max(0.0, 1.0 - per_test * static_cast<double>(products_.size()));
    bool ok = n_paths_ >= config_.min_paths;
    if (!ok) r.notes.push_back("fewer paths than the configured minimum");
    for (std::size_t p = 0; p < n_pairs_; ++p) {
        for (std::size_t j = 0; j < kDefaultBasket.size(); ++j) {
            ZEntry e;
            e.s = config_.checkpoints[p];
            e.t = config_.checkpoints[p + 1];
            e.statistic = kDefaultBasket[j];
            const auto est = estimate_mean(products_[p * kDefaultBasket.size() + j]);
            e.mean = est.mean;
            e.std_error = est.std_error;
            if (est.std_error == 0.0) {
                e.skipped = true;
                r.notes.push_back("zero-variance statistic " + std::string(to_string(e.statistic)) +
                                  " on [" + std::to_string(e.s) + ", " + std::to_string(e.t) +
                                  "] skipped");
            } else {
                e.z = est.mean / est.std_error;
                r.max_abs_z = std::max(r.max_abs_z, std::abs(e.z));
                if (!(std::abs(e.z) < config_.z_threshold)) ok = false;
            }
            r.entries.push_back(e);
        }
    }
    r.notes.push_back("threshold |z| < " + std::to_string(config_.z_threshold) + " per entry; Bonferroni bound over " +
                      std::to_string(products_.size()) + " entries");
    r.notes.push_back("basket spans a small sub-sigma-algebra of the path filtration: a partial test");
    r.pass = ok;
    return r;
}

nlohmann::json MartingaleReport::to_json() const {
    nlohmann::json j;
    j["checkpoints"] = checkpoints;
    j["n_paths"] = n_paths;
    j["z_threshold"] = z_threshold;
    j["confidence"] = confidence;
    j["max_abs_z"] = max_abs_z;
    j["pass"] = pass;
    const std::size_t basket = kDefaultBasket.size();
    nlohmann::json matrix = nlohmann::json::array();
    std::vector<std::string> stats;
    for (auto s : kDefaultBasket) stats.emplace_back(to_string(s));
    for (std::size_t p = 0; p * basket < entries.size(); ++p) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < basket; ++k) {
            const auto& e = entries[p * basket + k];
            row.push_back(e.skipped ? nlohmann::json(nullptr) : nlohmann::json(e.z));
        }
        matrix.push_back(row);
    }
    j["statistics"] = stats;
    j["z_matrix"] = matrix;
    j["notes"] = notes;
    return j;
}

MartingaleReport martingale_zscore(std::span<const SamplePath> m_paths,
                                   std::span<const SamplePath> x_paths,
                                   const MartingaleConfig& config) {
    if (m_paths.size() != x_paths.size() || m_paths.empty())
        throw std::invalid_argument("martingale_zscore: need matching non-empty ensembles");
    MartingaleAccumulator acc(m_paths.size(), m_paths.front().grid, config);
    for (std::size_t k = 0; k < m_paths.size(); ++k) acc.record(k, m_paths[k], x_paths[k]);
    return acc.report();
}

}  // namespace lowbessel
