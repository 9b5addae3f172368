#include "lowbessel/studies.hpp"

#include "lowbessel/density.hpp"
#include "lowbessel/generator.hpp"
#include "lowbessel/girsanov.hpp"
#include "lowbessel/parallel.hpp"
#include "lowbessel/pathdep.hpp"
#include "lowbessel/random.hpp"
#include "lowbessel/sde_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lowbessel {

namespace {

nlohmann::json mean_json(const MeanEstimate& m) {
    return {{"mean", m.mean}, {"std_error", m.std_error}, {"stddev", m.stddev}, {"n", m.n}};
}

TimeGrid grid_of(const EnsembleOptions& o) { return TimeGrid::uniform(o.horizon, o.steps); }

void require_paths(const EnsembleOptions& o) {
    if (o.paths == 0) throw std::invalid_argument("ensemble needs at least one path");
    if (!(o.x0 >= 0.0)) throw std::domain_error("x0 must be >= 0");
}

}  // namespace

std::vector<double> exact_terminal_values(const EnsembleOptions& o, Stream stream) {
    require_paths(o);
    const Dimension d(o.delta);
    const auto grid = grid_of(o);
    return parallel_map<double>(o.paths, o.threads, [&](std::size_t k) {
        const auto s = sample_besq_exact(o.x0 * o.x0, d, grid, derive_seed(o.seed, k, stream));
        return std::sqrt(s.back());
    });
}

nlohmann::json MeanIdentityResult::to_json() const {
    return {{"s_terminal", mean_json(s_terminal)}, {"target", target}, {"z", z}, {"pass", pass}};
}

MeanIdentityResult mean_identity_study(const EnsembleOptions& o) {
    require_paths(o);
    const Dimension d(o.delta);
    const auto grid = grid_of(o);
    const auto s = parallel_map<double>(o.paths, o.threads, [&](std::size_t k) {
        return sample_besq_exact(o.x0 * o.x0, d, grid, derive_seed(o.seed, k)).back();
    });
    MeanIdentityResult r;
    r.s_terminal = estimate_mean(s);
    r.target = o.x0 * o.x0 + o.delta * o.horizon;
    r.z = z_score(r.s_terminal, r.target);
    r.pass = std::abs(r.z) < 3.0;
    return r;
}

nlohmann::json DensityCheckResult::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : table) rows.push_back({t[0], t[1], t[2]});
    return {{"ks", ks},
            {"critical", critical},
            {"exact_zero_check", exact_zero_check},
            {"nonzero_values", nonzero_values},
            {"pass", pass},
            {"table", rows}};
}

DensityCheckResult density_check(const EnsembleOptions& o, double alpha) {
    auto x = exact_terminal_values(o);
    DensityCheckResult r;
    if (o.delta == 0.0 && o.x0 == 0.0) {
        // The null path: check whole paths, not just X_T.
        r.exact_zero_check = true;
        const auto grid = grid_of(o);
        const auto bad = parallel_map<std::size_t>(o.paths, o.threads, [&](std::size_t k) {
            const auto s = sample_besq_exact(0.0, Dimension(0.0), grid, derive_seed(o.seed, k));
            return static_cast<std::size_t>(std::count_if(s.values.begin(), s.values.end(),
                                                          [](double v) { return v != 0.0; }));
        });
        for (auto b : bad) r.nonzero_values += b;
        r.pass = r.nonzero_values == 0;
        return r;
    }
    const DensitySpec spec(Dimension(o.delta), o.x0, o.horizon);
    r.ks = ks_one_sample(x, [&](std::span<const double> pts) { return bes_cdf(spec, pts); });
    r.critical = ks_critical_one_sample(x.size(), alpha);
    r.pass = r.ks < r.critical;

    std::sort(x.begin(), x.end());
    std::vector<double> pts;
    for (int q = 1; q <= 9; ++q) {
        const double y = x[static_cast<std::size_t>(q * (x.size() - 1) / 10)];
        if (pts.empty() || y > pts.back()) pts.push_back(y);
    }
    const auto model = bes_cdf(spec, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto upto = std::upper_bound(x.begin(), x.end(), pts[i]) - x.begin();
        r.table.push_back(std::array<double, 3>{pts[i], static_cast<double>(upto) / static_cast<double>(x.size()), model[i].right});
    }
    return r;
}

nlohmann::json MartingaleStudyResult::to_json() const {
    auto j = report.to_json();
    j["x_terminal"] = mean_json(x_terminal);
    j["flipped_paths"] = flipped_paths;
    return j;
}

MartingaleStudyResult martingale_study(const EnsembleOptions& o, const MartingaleStudyOptions& m) {
    require_paths(o);
    const Dimension d(o.delta);
    const Dimension model(m.model_delta.value_or(o.delta));
    const auto f = catalog_function(m.f, model);
    if (f.membership == Membership::rejected)
        throw std::domain_error("test function " + m.f + " is not in the domain of the generator");
    const auto grid = grid_of(o);
    const auto gamma = m.gamma == 0.0 ? PathFunctional::zero() : PathFunctional::constant(m.gamma);

    MartingaleAccumulator acc(o.paths, grid, m.config);
    std::vector<double> terminal(o.paths);
    std::vector<unsigned char> flipped(o.paths, 0);
    parallel_for(o.paths, o.threads, [&](std::size_t k) {
        const auto seed = derive_seed(o.seed, k);
        SamplePath x = m.gamma == 0.0 ? sqrt_path(sample_besq_exact(o.x0 * o.x0, d, grid, seed))
                                      : solve_pathdep_bessel(o.x0, d, gamma, grid, seed);
        if (m.flip_after_zero) {
            if (const auto hit = first_zero_bridge(x, d, seed)) {
                x = sign_flip_after(x, *hit);
                flipped[k] = 1;
            }
        }
        acc.record(k, compute_Mf(x, f, model, gamma), x);
        terminal[k] = x.back();
    });

    MartingaleStudyResult r;
    r.report = acc.report();
    r.x_terminal = estimate_mean(terminal);
    r.flipped_paths = static_cast<std::size_t>(std::count(flipped.begin(), flipped.end(), 1));
    return r;
}

nlohmann::json NonUniquenessResult::to_json() const {
    return {{"plain", plain.to_json()},
            {"flipped", flipped.to_json()},
            {"mean_gap", mean_gap},
            {"gap_std_error", gap_std_error},
            {"gap_z", gap_z},
            {"pass", pass}};
}

NonUniquenessResult nonuniqueness_study(const EnsembleOptions& o, const std::string& f) {
    MartingaleStudyOptions m;
    m.f = f;
    NonUniquenessResult r;
    r.plain = martingale_study(o, m);
    m.flip_after_zero = true;
    r.flipped = martingale_study(o, m);
    r.mean_gap = r.plain.x_terminal.mean - r.flipped.x_terminal.mean;
    r.gap_std_error = std::hypot(r.plain.x_terminal.std_error, r.flipped.x_terminal.std_error);
    r.gap_z = r.gap_std_error > 0.0 ? r.mean_gap / r.gap_std_error : 0.0;
    r.pass = r.flipped.report.pass && std::abs(r.gap_z) > 5.0;
    return r;
}

nlohmann::json AbsorptionResult::to_json() const {
    return {{"absorbed", absorbed}, {"violations", violations}, {"pass", violations == 0}};
}

AbsorptionResult absorption_check(const EnsembleOptions& o) {
    require_paths(o);
    const Dimension d(o.delta);
    const auto grid = grid_of(o);
    // 0: never hit, 1: absorbed, 2: left 0 again
    const auto state = parallel_map<int>(o.paths, o.threads, [&](std::size_t k) {
        const auto s = sample_besq_exact(o.x0 * o.x0, d, grid, derive_seed(o.seed, k));
        const auto hit = std::find(s.values.begin(), s.values.end(), 0.0);
        if (hit == s.values.end()) return 0;
        return std::all_of(hit, s.values.end(), [](double v) { return v == 0.0; }) ? 1 : 2;
    });
    AbsorptionResult r;
    for (int s : state) {
        r.absorbed += s == 1;
        r.violations += s == 2;
    }
    return r;
}

nlohmann::json GirsanovStudyResult::to_json() const {
    return {{"estimate_direct", direct.mean},
            {"stderr_direct", direct.std_error},
            {"estimate_reweighted", reweighted},
            {"stderr_reweighted", reweighted_std_error},
            {"stderr_combined", stderr_combined},
            {"ess", ess},
            {"z", z},
            {"pass", pass},
            {"warnings", warnings}};
}

GirsanovStudyResult girsanov_study(const EnsembleOptions& o, double gamma, SchemeVariant variant) {
    require_paths(o);
    const Dimension d(o.delta);
    const auto grid = grid_of(o);
    const auto drift = PathFunctional::constant(gamma);
    const auto zero = PathFunctional::zero();

    const auto direct = parallel_map<double>(o.paths, o.threads, [&](std::size_t k) {
        return solve_pathdep_bessel(o.x0, d, drift, grid, derive_seed(o.seed, k), variant).back();
    });
    std::vector<double> obs(o.paths), weight(o.paths);
    parallel_for(o.paths, o.threads, [&](std::size_t k) {
        const auto x = solve_pathdep_bessel(o.x0, d, zero, grid,
                                            derive_seed(o.seed, k, Stream::ensemble_b), variant);
        obs[k] = x.back();
        weight[k] = std::exp(novikov_log_weight(x, drift));
    });

    GirsanovStudyResult r;
    r.direct = estimate_mean(direct);
    const auto rw = reweighted_expectation(weight, obs);
    r.reweighted = rw.estimate;
    r.reweighted_std_error = rw.std_error;
    r.ess = rw.ess;
    r.warnings = rw.warnings;
    r.stderr_combined = std::hypot(r.direct.std_error, rw.std_error);
    r.z = (r.direct.mean - rw.estimate) / r.stderr_combined;
    r.pass = std::abs(r.z) < 3.0;
    return r;
}

nlohmann::json SchemeConsistencyResult::to_json() const {
    return {{"steps", steps}, {"ks", ks},         {"ratios", ratios},
            {"ratio_low", ratio_low}, {"ratio_high", ratio_high}, {"pass", pass}};
}

SchemeConsistencyResult scheme_consistency_study(const EnsembleOptions& o,
                                                 const std::vector<std::size_t>& steps,
                                                 SchemeVariant variant) {
    require_paths(o);
    if (steps.empty()) throw std::invalid_argument("scheme_consistency_study: no grids");
    const std::size_t finest = *std::max_element(steps.begin(), steps.end());
    for (auto n : steps)
        if (n == 0 || finest % n != 0) throw std::invalid_argument("grids must divide the finest one");

    EnsembleOptions exact_opts = o;
    exact_opts.steps = 1;  // only the terminal law matters
    const auto exact = exact_terminal_values(exact_opts, Stream::ensemble_b);

    const Dimension d(o.delta);
    const auto drift = bar_gamma(PathFunctional::zero(), d);
    const auto fine_grid = TimeGrid::uniform(o.horizon, finest);
    std::vector<std::vector<double>> euler(steps.size(), std::vector<double>(o.paths));
    parallel_for(o.paths, o.threads, [&](std::size_t k) {
        const auto fine = brownian_increments(fine_grid, derive_seed(o.seed, k));
        for (std::size_t l = 0; l < steps.size(); ++l) {
            std::vector<double> dw(steps[l]);
            coarsen_increments(fine, finest / steps[l], dw);
            const auto s = euler_besq(o.x0 * o.x0, drift, TimeGrid::uniform(o.horizon, steps[l]), dw, variant);
            euler[l][k] = std::sqrt(s.back());
        }
    });

    SchemeConsistencyResult r;
    r.steps = steps;
    for (const auto& e : euler) r.ks.push_back(ks_two_sample(e, exact));
    r.pass = true;
    for (std::size_t l = 1; l < r.ks.size(); ++l) {
        const double ratio = r.ks[l] / r.ks[l - 1];
        r.ratios.push_back(ratio);
        if (!(ratio >= r.ratio_low && ratio <= r.ratio_high)) r.pass = false;
    }
    return r;
}

nlohmann::json RadialStudyResult::to_json() const {
    return {{"ks", ks}, {"critical", critical}, {"pass", pass}};
}

RadialStudyResult radial_study(const EnsembleOptions& o, double gamma, double alpha) {
    require_paths(o);
    const double rounded = std::round(o.delta);
    if (rounded != o.delta) throw std::domain_error("radial_study: delta must be an integer");
    const int dim = static_cast<int>(rounded);
    const auto grid = grid_of(o);
    const auto drift = PathFunctional::constant(gamma);
    const auto radial = parallel_map<double>(o.paths, o.threads, [&](std::size_t k) {
        return radial_bessel_oracle(dim, o.x0, drift, grid, derive_seed(o.seed, k, Stream::radial)).back();
    });
    const auto solved = parallel_map<double>(o.paths, o.threads, [&](std::size_t k) {
        return solve_pathdep_bessel(o.x0, Dimension(o.delta), drift, grid, derive_seed(o.seed, k)).back();
    });
    RadialStudyResult r;
    r.ks = ks_two_sample(radial, solved);
    r.critical = ks_critical_two_sample(radial.size(), solved.size(), alpha);
    r.pass = r.ks < r.critical;
    return r;
}

nlohmann::json LimitStudyResult::to_json() const {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : rows)
        table.push_back({{"x", row.x}, {"value", row.value}, {"limit", row.limit}, {"rel_err", row.rel_err}});
    nlohmann::json j = {{"table", table}, {"pass", pass}};
    if (limit) {
        j["limit"] = *limit;
        j["rel_error"] = rel_error;
    } else {
        j["decay_ratio"] = decay_ratio;
    }
    return j;
}

LimitStudyResult limit_study(double delta, double x0, double horizon) {
    const Dimension d(delta);
    LimitStudyResult r;
    double at_tenth = 0.0, at_probe = 0.0;
    for (int k = 1; k <= 6; ++k) {
        const double x = std::pow(10.0, -k);
        const double v = weighted_time_integral(d, x0, horizon, x);
        r.rows.push_back({x, v});
        if (k == 1) at_tenth = v;
        if (k == 4) at_probe = v;
    }
    const double target = x0 == 0.0 ? origin_occupation_limit(d, horizon) : 0.0;
    for (auto& row : r.rows) {
        row.limit = target;
        row.rel_err = target == 0.0 ? std::abs(row.value) : std::abs(row.value - target) / target;
    }
    if (x0 == 0.0) {
        r.limit = target;
        r.rel_error = std::abs(at_probe - *r.limit) / *r.limit;
        r.pass = r.rel_error < 0.01;
    } else {
        r.decay_ratio = at_probe / at_tenth;
        r.pass = r.decay_ratio < 1e-2;
    }
    return r;
}

}  // namespace lowbessel
