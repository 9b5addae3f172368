#pragma once

// Shared domain types: time grids, sample paths, stopped-path views and
// non-anticipative drift functionals.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lowbessel {

/// Strictly increasing time nodes 0 = t_0 < ... < t_n = T.
class TimeGrid {
public:
    /// Uniform grid with `n_steps` intervals on [0, horizon].
    static TimeGrid uniform(double horizon, std::size_t n_steps);
    /// Arbitrary nodes; must start at 0 and be strictly increasing.
    static TimeGrid from_nodes(std::vector<double> nodes);

    [[nodiscard]] double horizon() const { return times_.back(); }
    [[nodiscard]] std::size_t n_steps() const { return times_.size() - 1; }
    [[nodiscard]] std::span<const double> times() const { return times_; }
    [[nodiscard]] double time(std::size_t i) const { return times_[i]; }
    [[nodiscard]] double dt(std::size_t i) const { return times_[i + 1] - times_[i]; }
    [[nodiscard]] bool is_uniform() const { return uniform_; }

    /// Index of the last node <= t (t must lie in [0, T]).
    [[nodiscard]] std::size_t index_at_or_before(double t) const;

    /// Grid with every interval split into `factor` equal pieces.
    [[nodiscard]] TimeGrid refined(std::size_t factor) const;

    bool operator==(const TimeGrid&) const = default;

private:
    explicit TimeGrid(std::vector<double> nodes, bool uniform)
        : times_(std::move(nodes)), uniform_(uniform) {}

    std::vector<double> times_;
    bool uniform_ = false;
};

/// A discretised trajectory. `noise` holds the Brownian increment used for
/// each step when the path was produced by an Euler-type scheme.
struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;
    std::vector<double> noise;
    std::uint64_t seed = 0;

    SamplePath(TimeGrid g, std::vector<double> v, std::vector<double> dw = {},
               std::uint64_t s = 0);

    [[nodiscard]] bool has_noise() const { return !noise.empty(); }
    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double front() const { return values.front(); }
    [[nodiscard]] double back() const { return values.back(); }
};

/// Pointwise map applied lazily when a view is read.
enum class ValueMap { identity, sqrt_abs };

/// Read-only view of a path stopped at grid node `last`: only nodes 0..last
/// are visible, so any functional of it is non-anticipative.
class PathView {
public:
    PathView(std::span<const double> times, std::span<const double> values,
             ValueMap map = ValueMap::identity);

    static PathView stopped(const SamplePath& p, std::size_t last);

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] std::size_t last_index() const { return values_.size() - 1; }
    [[nodiscard]] double time(std::size_t i) const { return times_[i]; }
    [[nodiscard]] double now() const { return times_[last_index()]; }
    [[nodiscard]] double value(std::size_t i) const {
        const double v = values_[i];
        return map_ == ValueMap::identity ? v : std::sqrt(v < 0 ? -v : v);
    }
    [[nodiscard]] double current() const { return value(last_index()); }

    /// The same view composed with x -> sqrt(|x|).
    [[nodiscard]] PathView sqrt_abs() const;

    /// sup_{i} |value(i)|.
    [[nodiscard]] double sup_abs() const;
    /// Left-endpoint Riemann sum of value(i) over the visible nodes.
    [[nodiscard]] double integral() const;

private:
    std::span<const double> times_;
    std::span<const double> values_;
    ValueMap map_;
};

/// Non-anticipative drift functional Gamma(t, eta^t). The evaluator reads
/// the current time from `PathView::now()`. Evaluators must be pure.
struct PathFunctional {
    using Evaluator = std::function<double(const PathView&)>;

    Evaluator evaluate;
    std::string name = "gamma";
    /// K in |Gamma(s, eta)| <= K (1 + sup sqrt|eta|).
    std::optional<double> growth_constant;
    /// K in the Lipschitz bound on the induced squared-process drift.
    std::optional<double> lipschitz_constant;
    std::optional<double> bounded_by;

    double operator()(const PathView& v) const { return evaluate(v); }

    static PathFunctional zero();
    static PathFunctional constant(double c);
};

struct Dimension {
    double delta = 0.0;

    explicit Dimension(double d);
    [[nodiscard]] bool low_dim() const { return delta >= 0.0 && delta <= 1.0; }
    /// Bessel index nu = delta/2 - 1.
    [[nodiscard]] double nu() const { return 0.5 * delta - 1.0; }
};

/// Path frozen after time t (constant equal to its value at t afterwards).
SamplePath stop_path(const SamplePath& path, double t);

/// Induced drift of the squared process:
/// 2 sqrt|eta(s)| Gamma(s, sqrt|eta^s|) + delta.
PathFunctional bar_gamma(const PathFunctional& gamma, Dimension delta);

/// Two-sided clamp (Gamma v -N) ^ N.
PathFunctional clamp_functional(const PathFunctional& gamma, double n);

}  // namespace lowbessel
