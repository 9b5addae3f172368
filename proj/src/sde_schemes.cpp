#include "lowbessel/sde_schemes.hpp"

#include "lowbessel/density.hpp"
#include "lowbessel/generator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lowbessel {

double besq_exact_transition(Engine& rng, double s, double delta, double dt) {
    const double lambda = s / (2.0 * dt);
    long long n = 0;
    if (lambda > 0.0) n = std::poisson_distribution<long long>(lambda)(rng);
    const double shape = 0.5 * delta + static_cast<double>(n);
    if (shape == 0.0) return 0.0;  // BESQ^0 absorbed at 0
    return 2.0 * dt * std::gamma_distribution<double>(shape, 1.0)(rng);
}

SamplePath sample_besq_exact(double s0, Dimension delta, const TimeGrid& grid, std::uint64_t seed) {
    if (!(s0 >= 0.0)) throw std::domain_error("sample_besq_exact: s0 must be >= 0");
    Engine rng(derive_seed(seed, 0, Stream::exact_transition));
    std::vector<double> v(grid.n_steps() + 1);
    v[0] = s0;
    for (std::size_t i = 0; i < grid.n_steps(); ++i)
        v[i + 1] = besq_exact_transition(rng, v[i], delta.delta, grid.dt(i));
    return SamplePath(grid, std::move(v), {}, seed);
}

std::vector<double> brownian_increments(const TimeGrid& grid, std::uint64_t seed) {
    Engine rng(derive_seed(seed, 0, Stream::brownian));
    std::vector<double> steps(grid.n_steps());
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = grid.dt(i);
    std::vector<double> dw(grid.n_steps());
    fill_brownian(rng, steps, dw);
    return dw;
}

std::vector<SamplePath> euler_besq_batch(double s0, const PathFunctional& drift_bar,
                                         const TimeGrid& grid,
                                         std::span<const std::vector<double>> increments,
                                         SchemeVariant variant) {
    if (!(s0 >= 0.0)) throw std::domain_error("euler_besq: s0 must be >= 0");
    const std::size_t lanes = increments.size();
    const std::size_t steps = grid.n_steps();
    for (const auto& dw : increments)
        if (dw.size() != steps) throw std::invalid_argument("euler_besq: increments size mismatch");

    std::vector<std::vector<double>> values(lanes, std::vector<double>(steps + 1));
    std::vector<double> state(lanes, s0), drift(lanes), dw(lanes);
    for (auto& v : values) v[0] = s0;
    const auto times = grid.times();
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t k = 0; k < lanes; ++k) {
            const PathView view(times.first(i + 1), std::span<const double>(values[k]).first(i + 1));
            drift[k] = drift_bar(view);
            dw[k] = increments[k][i];
        }
        kernels::besq_euler_step(state, drift, dw, grid.dt(i), variant);
        for (std::size_t k = 0; k < lanes; ++k) values[k][i + 1] = state[k];
    }
    std::vector<SamplePath> out;
    out.reserve(lanes);
    for (std::size_t k = 0; k < lanes; ++k)
        out.emplace_back(grid, std::move(values[k]), increments[k], 0);
    return out;
}

SamplePath euler_besq(double s0, const PathFunctional& drift_bar, const TimeGrid& grid,
                      std::span<const double> increments, SchemeVariant variant,
                      std::uint64_t seed) {
    std::vector<std::vector<double>> one{std::vector<double>(increments.begin(), increments.end())};
    auto paths = euler_besq_batch(s0, drift_bar, grid, one, variant);
    paths.front().seed = seed;
    return std::move(paths.front());
}

SamplePath euler_besq(double s0, const PathFunctional& drift_bar, const TimeGrid& grid,
                      std::uint64_t seed, SchemeVariant variant) {
    const auto dw = brownian_increments(grid, seed);
    return euler_besq(s0, drift_bar, grid, dw, variant, seed);
}

SamplePath sqrt_path(const SamplePath& s) {
    for (double v : s.values)
        if (!(v >= 0.0)) throw std::domain_error("sqrt_path: negative value in squared path");
    std::vector<double> out(s.values.size());
    kernels::sqrt_elementwise(s.values, out);
    return SamplePath(s.grid, std::move(out), s.noise, s.seed);
}

ReflectedPath reflected_bm(double x0, const TimeGrid& grid, std::span<const double> increments) {
    if (!(x0 >= 0.0)) throw std::domain_error("reflected_bm: x0 must be >= 0");
    if (increments.size() != grid.n_steps())
        throw std::invalid_argument("reflected_bm: increments size mismatch");
    const std::size_t n = grid.n_steps();
    std::vector<double> x(n + 1), l(n + 1);
    double w = 0.0;
    double push = 0.0;  // max(0, sup -(x0 + W))
    x[0] = x0;
    for (std::size_t i = 0; i < n; ++i) {
        w += increments[i];
        push = std::max(push, -(x0 + w));
        l[i + 1] = push;
        x[i + 1] = x0 + w + push;
    }
    std::vector<double> dw(increments.begin(), increments.end());
    return {SamplePath(grid, std::move(x), dw), SamplePath(grid, std::move(l))};
}

ReflectedPath reflected_bm(double x0, const TimeGrid& grid, std::uint64_t seed) {
    auto r = reflected_bm(x0, grid, brownian_increments(grid, seed));
    r.x.seed = seed;
    r.local_time.seed = seed;
    return r;
}

SamplePath sign_flip_after(const SamplePath& x, std::size_t last_unflipped) {
    SamplePath out = x;
    for (std::size_t j = last_unflipped + 1; j < out.values.size(); ++j) out.values[j] = -out.values[j];
    return out;
}

SamplePath sign_flip_after_zero(const SamplePath& x) {
    for (double v : x.values)
        if (v < -kZeroTolerance) throw std::domain_error("sign_flip_after_zero: path must be >= 0");
    for (std::size_t i = 0; i < x.values.size(); ++i)
        if (x.values[i] <= kZeroTolerance) return sign_flip_after(x, i);
    return x;
}

std::optional<std::size_t> first_zero_bridge(const SamplePath& x, Dimension delta,
                                             std::uint64_t seed) {
    Engine rng(derive_seed(seed, 0, Stream::bridge));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double d = delta.delta;
    const bool can_touch = d > 0.0 && d < 2.0;
    const double order = 1.0 - 0.5 * d;  // |nu|
    for (std::size_t i = 0; i + 1 < x.values.size(); ++i) {
        const double a = x.values[i];
        const double b = x.values[i + 1];
        if (a <= kZeroTolerance || b <= kZeroTolerance) return i;
        const double u = unif(rng);
        if (!can_touch) continue;
        const double z = a * b / x.grid.dt(i);
        const double avoid = bessel_I_scaled(order, z) / bessel_I_scaled(-order, z);
        if (u >= avoid) return i;
    }
    return std::nullopt;
}

SamplePath lamperti_sde(double y0, Dimension delta, const TimeGrid& grid, std::uint64_t seed) {
    if (!delta.low_dim()) throw std::domain_error("lamperti_sde: delta must lie in [0, 1]");
    auto dw = brownian_increments(grid, seed);
    std::vector<double> y(grid.n_steps() + 1);
    y[0] = y0;
    for (std::size_t i = 0; i < grid.n_steps(); ++i) y[i + 1] = y[i] + sigma0(delta, y[i]) * dw[i];
    return SamplePath(grid, std::move(y), std::move(dw), seed);
}

}  // namespace lowbessel
