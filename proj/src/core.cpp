#include "lowbessel/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lowbessel {

TimeGrid TimeGrid::uniform(double horizon, std::size_t n_steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::domain_error("TimeGrid: horizon must be positive");
    if (n_steps == 0) throw std::domain_error("TimeGrid: need at least one step");
    std::vector<double> t(n_steps + 1);
    const double h = horizon / static_cast<double>(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) t[i] = h * static_cast<double>(i);
    t[n_steps] = horizon;
    return TimeGrid(std::move(t), true);
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2) throw std::domain_error("TimeGrid: need at least two nodes");
    if (nodes.front() != 0.0) throw std::domain_error("TimeGrid: first node must be 0");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i]))
            throw std::domain_error("TimeGrid: nodes must be strictly increasing");
    }
    return TimeGrid(std::move(nodes), false);
}

std::size_t TimeGrid::index_at_or_before(double t) const {
    if (t < 0.0 || t > horizon()) throw std::domain_error("TimeGrid: time outside [0, T]");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
    if (factor == 0) throw std::domain_error("TimeGrid: refinement factor must be >= 1");
    if (uniform_) return uniform(horizon(), n_steps() * factor);
    std::vector<double> t;
    t.reserve(n_steps() * factor + 1);
    for (std::size_t i = 0; i < n_steps(); ++i) {
        const double h = dt(i) / static_cast<double>(factor);
        for (std::size_t k = 0; k < factor; ++k) t.push_back(times_[i] + h * static_cast<double>(k));
    }
    t.push_back(horizon());
    return TimeGrid(std::move(t), false);
}

SamplePath::SamplePath(TimeGrid g, std::vector<double> v, std::vector<double> dw, std::uint64_t s)
    : grid(std::move(g)), values(std::move(v)), noise(std::move(dw)), seed(s) {
    if (values.size() != grid.n_steps() + 1)
        throw std::invalid_argument("SamplePath: values must have n_steps + 1 entries");
    if (!noise.empty() && noise.size() != grid.n_steps())
        throw std::invalid_argument("SamplePath: noise must have n_steps entries");
}

PathView::PathView(std::span<const double> times, std::span<const double> values, ValueMap map)
    : times_(times), values_(values), map_(map) {
    if (values_.empty() || times_.size() < values_.size())
        throw std::invalid_argument("PathView: inconsistent spans");
}

PathView PathView::stopped(const SamplePath& p, std::size_t last) {
    if (last >= p.values.size()) throw std::out_of_range("PathView: index beyond path");
    return PathView(p.grid.times().first(last + 1),
                    std::span<const double>(p.values).first(last + 1));
}

PathView PathView::sqrt_abs() const {
    if (map_ == ValueMap::sqrt_abs)
        throw std::logic_error("PathView: nested sqrt maps are not supported");
    return PathView(times_, values_, ValueMap::sqrt_abs);
}

double PathView::sup_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m = std::max(m, std::abs(value(i)));
    return m;
}

double PathView::integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < size(); ++i) acc += value(i) * (times_[i + 1] - times_[i]);
    return acc;
}

PathFunctional PathFunctional::zero() {
    return PathFunctional{[](const PathView&) { return 0.0; }, "zero", 0.0, 0.0, 0.0};
}

PathFunctional PathFunctional::constant(double c) {
    // 2 sqrt|eta(s)| c is not Lipschitz at 0 unless c = 0.
    std::optional<double> lip;
    if (c == 0.0) lip = 0.0;
    return PathFunctional{[c](const PathView&) { return c; }, "const", std::abs(c), lip,
                          std::abs(c)};
}

Dimension::Dimension(double d) : delta(d) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::domain_error("Dimension: delta must be >= 0");
}

SamplePath stop_path(const SamplePath& path, double t) {
    const std::size_t k = path.grid.index_at_or_before(t);
    SamplePath out = path;
    std::fill(out.values.begin() + static_cast<std::ptrdiff_t>(k) + 1, out.values.end(),
              path.values[k]);
    return out;
}

PathFunctional bar_gamma(const PathFunctional& gamma, Dimension delta) {
    PathFunctional out;
    out.name = "bar(" + gamma.name + ")";
    out.evaluate = [g = gamma.evaluate, d = delta.delta](const PathView& eta) {
        return 2.0 * std::sqrt(std::abs(eta.current())) * g(eta.sqrt_abs()) + d;
    };
    // With m = sup|eta|: 2 sqrt(m) K (1 + m^{1/4}) + delta <= (5K/2 + delta)(1 + m)
    // by Young's inequality on sqrt(m) and m^{3/4}.
    if (gamma.growth_constant) out.growth_constant = 2.5 * *gamma.growth_constant + delta.delta;
    return out;
}

PathFunctional clamp_functional(const PathFunctional& gamma, double n) {
    if (!(n > 0.0)) throw std::domain_error("clamp_functional: N must be positive");
    PathFunctional out = gamma;
    out.name = "clamp(" + gamma.name + ")";
    out.evaluate = [g = gamma.evaluate, n](const PathView& eta) {
        return std::clamp(g(eta), -n, n);
    };
    out.bounded_by = gamma.bounded_by ? std::min(*gamma.bounded_by, n) : n;
    out.growth_constant = gamma.growth_constant ? std::min(*gamma.growth_constant, n) : n;
    return out;
}

}  // namespace lowbessel
