#include "lowbessel/pathdep.hpp"

#include "lowbessel/parallel.hpp"
#include "lowbessel/random.hpp"
#include "lowbessel/sde_schemes.hpp"
#include "lowbessel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lowbessel {

SamplePath solve_pathdep_bessel(double x0, Dimension delta, const PathFunctional& gamma,
                                const TimeGrid& grid, std::span<const double> increments,
                                SchemeVariant variant) {
    if (!(x0 >= 0.0)) throw std::domain_error("solve_pathdep_bessel: x0 must be >= 0");
    const auto s = euler_besq(x0 * x0, bar_gamma(gamma, delta), grid, increments, variant);
    return sqrt_path(s);
}

SamplePath solve_pathdep_bessel(double x0, Dimension delta, const PathFunctional& gamma,
                                const TimeGrid& grid, std::uint64_t seed, SchemeVariant variant) {
    if (!(x0 >= 0.0)) throw std::domain_error("solve_pathdep_bessel: x0 must be >= 0");
    auto x = sqrt_path(euler_besq(x0 * x0, bar_gamma(gamma, delta), grid, seed, variant));
    x.seed = seed;
    return x;
}

PathFunctional clipped_running_sup(double k) {
    if (!(k > 0.0)) throw std::domain_error("clipped_running_sup: k must be positive");
    PathFunctional g;
    g.name = "clipped_running_sup";
    g.evaluate = [k](const PathView& eta) {
        double m = 0.0;
        for (std::size_t i = 0; i < eta.size(); ++i) m = std::max(m, std::sqrt(std::abs(eta.value(i))));
        return std::min(m, k);
    };
    g.growth_constant = k;
    g.bounded_by = k;
    return g;
}

PathFunctional saturating_feedback(double c) {
    PathFunctional g;
    g.name = "saturating_feedback";
    g.evaluate = [c](const PathView& xi) {
        const double v = xi.current();
        double energy = 0.0;
        for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
            const double y = xi.value(i);
            energy += y * y * (xi.time(i + 1) - xi.time(i));
        }
        return c * v / (1.0 + v * v) * (1.0 + 0.5 * std::sin(energy));
    };
    g.bounded_by = 0.75 * std::abs(c);
    g.growth_constant = 0.75 * std::abs(c);
    g.lipschitz_constant = 3.0 * std::abs(c);
    return g;
}

namespace {

constexpr double kRatioSlack = 1e-9;

// Nonnegative random path on [0, 1]: smooth, rough or an even mix.
std::vector<double> random_path(Engine& rng, const TimeGrid& grid, int kind) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = grid.n_steps() + 1;
    std::vector<double> smooth(n), rough(n);
    const double level = 3.0 * u(rng), amp = 2.0 * u(rng), freq = 0.5 + 2.5 * u(rng);
    const double phase = 2.0 * std::numbers::pi * u(rng), vol = 0.2 + 1.8 * u(rng);
    std::normal_distribution<double> z(0.0, 1.0);
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid.time(i);
        smooth[i] = level + amp * std::sin(2.0 * std::numbers::pi * freq * t + phase);
        if (i > 0) w += std::sqrt(grid.dt(i - 1)) * z(rng);
        rough[i] = level + vol * w;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = kind == 0 ? smooth[i] : kind == 1 ? rough[i] : 0.5 * (smooth[i] + rough[i]);
        out[i] = std::abs(v);
    }
    return out;
}

bool exceeds(double observed, const std::optional<double>& declared) {
    return declared && observed > *declared * (1.0 + kRatioSlack) + kRatioSlack;
}

}  // namespace

AssumptionReport probe_assumptions(const PathFunctional& gamma, Dimension delta,
                                   std::size_t n_samples, std::uint64_t seed,
                                   std::size_t n_steps) {
    const auto grid = TimeGrid::uniform(1.0, n_steps);
    const auto bar = bar_gamma(gamma, delta);
    Engine rng(derive_seed(seed, 0, Stream::probe));
    std::uniform_int_distribution<std::size_t> pick_node(0, n_steps);
    std::uniform_int_distribution<int> pick_kind(0, 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    AssumptionReport r;
    r.n_samples = n_samples;
    r.declared_growth = gamma.growth_constant;
    r.declared_bar_growth = bar.growth_constant;
    r.declared_lipschitz = gamma.lipschitz_constant;
    r.declared_bound = gamma.bounded_by;

    for (std::size_t k = 0; k < n_samples; ++k) {
        const auto a = random_path(rng, grid, pick_kind(rng));
        auto b = a;
        // Perturbations across scales probe the local Lipschitz ratio.
        const double scale = std::pow(10.0, -3.0 * u(rng));
        const auto bump = random_path(rng, grid, pick_kind(rng));
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::abs(b[i] + scale * (bump[i] - 1.5));
        const std::size_t s = pick_node(rng);
        const auto times = grid.times().first(s + 1);
        const PathView va(times, std::span<const double>(a).first(s + 1));
        const PathView vb(times, std::span<const double>(b).first(s + 1));

        const double g = gamma(va);
        r.observed_bound = std::max(r.observed_bound, std::abs(g));
        r.observed_growth = std::max(r.observed_growth, std::abs(g) / (1.0 + va.sqrt_abs().sup_abs()));

        const double ba = bar(va), bb = bar(vb);
        r.observed_bar_growth = std::max(r.observed_bar_growth, std::abs(ba) / (1.0 + va.sup_abs()));

        double dist = std::abs(a[s] - b[s]);
        for (std::size_t i = 0; i < s; ++i) dist += std::abs(a[i] - b[i]) * grid.dt(i);
        if (dist > 0.0) r.observed_lipschitz = std::max(r.observed_lipschitz, std::abs(ba - bb) / dist);
    }
    r.growth_violated = exceeds(r.observed_growth, r.declared_growth);
    r.bar_growth_violated = exceeds(r.observed_bar_growth, r.declared_bar_growth);
    r.lipschitz_violated = exceeds(r.observed_lipschitz, r.declared_lipschitz);
    r.bound_violated = exceeds(r.observed_bound, r.declared_bound);
    return r;
}

double coupling_distance(double x0, Dimension delta, const PathFunctional& gamma,
                         const TimeGrid& grid, std::span<const double> increments,
                         SchemeVariant a, SchemeVariant b) {
    if (!(x0 >= 0.0)) throw std::domain_error("coupling_distance: x0 must be >= 0");
    const auto bar = bar_gamma(gamma, delta);
    const auto sa = euler_besq(x0 * x0, bar, grid, increments, a);
    if (a == b) return 0.0;
    const auto sb = euler_besq(x0 * x0, bar, grid, increments, b);
    double d = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) d = std::max(d, std::abs(sa.values[i] - sb.values[i]));
    return d;
}

double coupling_distance(double x0, Dimension delta, const PathFunctional& gamma,
                         const TimeGrid& grid, std::uint64_t seed, SchemeVariant a,
                         SchemeVariant b) {
    return coupling_distance(x0, delta, gamma, grid, brownian_increments(grid, seed), a, b);
}

namespace {

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

CouplingStudy coupling_study(double x0, Dimension delta, const PathFunctional& gamma,
                             double horizon, std::size_t base_steps, std::size_t doublings,
                             std::size_t n_paths, std::uint64_t seed, SchemeVariant a,
                             SchemeVariant b, std::size_t threads) {
    if (n_paths == 0 || base_steps == 0) throw std::invalid_argument("coupling_study: empty study");
    const std::size_t levels = doublings + 1;
    const std::size_t finest = base_steps << doublings;
    const auto fine_grid = TimeGrid::uniform(horizon, finest);

    // dist[level][path]
    std::vector<std::vector<double>> dist(levels, std::vector<double>(n_paths));
    parallel_for(n_paths, threads, [&](std::size_t k) {
        const auto fine = brownian_increments(fine_grid, derive_seed(seed, k));
        for (std::size_t l = 0; l < levels; ++l) {
            const std::size_t steps = base_steps << l;
            std::vector<double> dw(steps);
            coarsen_increments(fine, finest / steps, dw);
            dist[l][k] = coupling_distance(x0, delta, gamma, TimeGrid::uniform(horizon, steps), dw, a, b);
        }
    });

    CouplingStudy study;
    for (std::size_t l = 0; l < levels; ++l) {
        CouplingLevel lv;
        lv.n_steps = base_steps << l;
        lv.q25 = quantile(dist[l], 0.25);
        lv.median = quantile(dist[l], 0.5);
        lv.q75 = quantile(dist[l], 0.75);
        lv.q90 = quantile(dist[l], 0.9);
        lv.mean = estimate_mean(dist[l]).mean;
        study.levels.push_back(lv);
    }
    study.median_decreasing = true;
    for (std::size_t l = 1; l < levels; ++l)
        if (!(study.levels[l].median < study.levels[l - 1].median)) study.median_decreasing = false;
    return study;
}

SamplePath radial_bessel_oracle(int delta, double x0, const PathFunctional& gamma,
                                const TimeGrid& grid, std::uint64_t seed) {
    if (delta != 2 && delta != 3) throw std::domain_error("radial_bessel_oracle: delta must be 2 or 3");
    if (!(x0 >= 0.0)) throw std::domain_error("radial_bessel_oracle: x0 must be >= 0");
    if (!gamma.bounded_by) throw std::domain_error("radial_bessel_oracle: Gamma must be bounded");

    const auto d = static_cast<std::size_t>(delta);
    const std::size_t n = grid.n_steps();
    std::vector<std::vector<double>> noise(d);
    for (std::size_t j = 0; j < d; ++j) noise[j] = brownian_increments(grid, derive_seed(seed, j, Stream::radial));

    std::vector<double> y(d, 0.0), norm(n + 1);
    y[0] = x0;
    norm[0] = x0;
    const auto times = grid.times();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = norm[i];
        const double g = gamma(PathView(times.first(i + 1), std::span<const double>(norm).first(i + 1)));
        const double push = r > 0.0 ? g * grid.dt(i) / r : 0.0;
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            y[j] += noise[j][i] + push * y[j];
            sq += y[j] * y[j];
        }
        norm[i + 1] = std::sqrt(sq);
    }
    return SamplePath(grid, std::move(norm), {}, seed);
}

SupMoments sup_moments(std::span<const SamplePath> paths) {
    if (paths.empty()) throw std::invalid_argument("sup_moments: empty ensemble");
    std::vector<double> p3(paths.size()), p6(paths.size());
    for (std::size_t k = 0; k < paths.size(); ++k) {
        double m = 0.0;
        for (double v : paths[k].values) m = std::max(m, std::abs(v));
        p3[k] = m * m * m;
        p6[k] = p3[k] * p3[k];
    }
    const auto e3 = estimate_mean(p3), e6 = estimate_mean(p6);
    SupMoments r{e3.mean, e6.mean, e3.std_error, e6.std_error, {}};
    for (const auto& [name, e] : {std::pair{"m=3", e3}, std::pair{"m=6", e6}}) {
        if (!std::isfinite(e.mean)) r.warnings.push_back(std::string("sup moment ") + name + " is not finite");
        else if (e.mean > 0.0 && e.std_error > 0.5 * e.mean)
            r.warnings.push_back(std::string("sup moment ") + name + " has relative error above 50%");
    }
    return r;
}

}  // namespace lowbessel
