#include "lowbessel/martingale.hpp"
#include "lowbessel/pathdep.hpp"
#include "lowbessel/sde_schemes.hpp"
#include "lowbessel/stats.hpp"
#include "lowbessel/studies.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace lowbessel;

namespace {

SamplePath exact_bes(double x0, double delta, std::size_t steps, std::uint64_t seed) {
    return sqrt_path(sample_besq_exact(x0 * x0, Dimension(delta), TimeGrid::uniform(1.0, steps), seed));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST(ComputeMf, SquareGivesMeanIdentityExactly) {
    const double delta = 0.5;
    const auto x = exact_bes(1.0, delta, 64, 3);
    const auto m = compute_Mf(x, monomial(2), Dimension(delta));
    EXPECT_EQ(m.values[0], 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ref = x.values[i] * x.values[i] - 1.0 - delta * x.grid.time(i);
        EXPECT_NEAR(m.values[i], ref, 1e-12);
    }
}

TEST(ComputeMf, ConstantGivesZero) {
    const auto x = exact_bes(1.0, 0.3, 32, 4);
    for (double v : compute_Mf(x, constant_function(2.5), Dimension(0.3)).values) EXPECT_EQ(v, 0.0);
}

TEST(ComputeMf, QuarticUsesLeftEndpointQuadrature) {
    const double delta = 0.7;
    const auto x = exact_bes(0.8, delta, 50, 5);
    const auto m = compute_Mf(x, monomial(4), Dimension(delta));
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        integral += x.values[i] * x.values[i] * x.grid.dt(i);
        const double ref = std::pow(x.values[i + 1], 4) - std::pow(0.8, 4) - 2.0 * (2.0 + delta) * integral;
        EXPECT_NEAR(m.values[i + 1], ref, 1e-11);
    }
}

TEST(ComputeMf, LinearInF) {
    const Dimension d(0.4);
    const auto x = exact_bes(1.0, 0.4, 40, 6);
    const auto f = monomial(2), g = bump_function(2.0);
    const auto combo = linear_combination(2.0, f, -3.0, g);
    const auto mf = compute_Mf(x, f, d), mg = compute_Mf(x, g, d), mc = compute_Mf(x, combo, d);
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_NEAR(mc.values[i], 2.0 * mf.values[i] - 3.0 * mg.values[i], 1e-12 * (1.0 + std::abs(mc.values[i])));
}

TEST(ComputeMf, DriftTermUsesGamma) {
    const Dimension d(0.5);
    const auto x = solve_pathdep_bessel(1.0, d, PathFunctional::constant(0.3), TimeGrid::uniform(1.0, 20), 9);
    const auto with = compute_Mf(x, monomial(2), d, PathFunctional::constant(0.3));
    const auto without = compute_Mf(x, monomial(2), d);
    double drift = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        drift += 2.0 * x.values[i] * 0.3 * x.grid.dt(i);
        EXPECT_NEAR(without.values[i + 1] - with.values[i + 1], drift, 1e-12);
    }
}

TEST(ComputeMf, RejectedFunctionThrows) {
    const auto x = exact_bes(1.0, 0.5, 8, 1);
    EXPECT_THROW(compute_Mf(x, monomial(1), Dimension(0.5)), std::domain_error);
}

TEST(ComputeMf, HalfLineRestrictionIsInvisibleToNonNegativePaths) {
    // g = x^2 plus a bump living on (-4, -2): identical on the half line.
    const auto bump = bump_function(1.0);
    TestFunction shifted{[b = bump.f](double x) { return b(x + 3.0); }, [b = bump.f1](double x) { return b(x + 3.0); },
                         [b = bump.f2](double x) { return b(x + 3.0); }, "shifted_bump", Membership::core_domain};
    const auto g = linear_combination(1.0, monomial(2), 1.0, shifted);
    const Dimension d(0.5);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto x = exact_bes(1.0, 0.5, 32, k);
        EXPECT_EQ(compute_Mf(x, g, d).values, compute_Mf(x, linear_combination(1.0, monomial(2), 0.0, shifted), d).values);
    }
}

TEST(StrongResidual, ConstantAndMissingNoise) {
    const auto x = solve_pathdep_bessel(1.0, Dimension(0.5), PathFunctional::zero(), TimeGrid::uniform(1.0, 16), 2);
    for (double v : strong_residual(x, constant_function(1.0), Dimension(0.5), PathFunctional::zero()).values) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(strong_residual(exact_bes(1.0, 0.5, 16, 2), monomial(2), Dimension(0.5), PathFunctional::zero()),
                 std::invalid_argument);
}

TEST(StrongResidual, ReflectedBrownianMotionLeavesLocalTimeTerm) {
    // X = x0 + W + L, f = x^2, delta = 1: R_t = sum (2 X_i dL_i + dX_i^2 - dt_i).
    const auto r = reflected_bm(0.3, TimeGrid::uniform(1.0, 400), 12);
    const auto res = strong_residual(r.x, monomial(2), Dimension(1.0), PathFunctional::zero());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < r.x.size(); ++i) {
        const double dl = r.local_time.values[i + 1] - r.local_time.values[i];
        const double dx = r.x.values[i + 1] - r.x.values[i];
        acc += 2.0 * r.x.values[i] * dl + dx * dx - r.x.grid.dt(i);
        EXPECT_NEAR(res.values[i + 1], acc, 1e-10);
    }
}

TEST(StrongResidual, ShrinksUnderRefinement) {
    const Dimension d(0.5);
    const auto f = monomial(4);
    const auto fine_grid = TimeGrid::uniform(1.0, 1024);
    std::vector<double> coarse_sup, fine_sup;
    for (std::uint64_t k = 0; k < 200; ++k) {
        const auto fine = brownian_increments(fine_grid, derive_seed(8, k));
        for (std::size_t steps : {64u, 1024u}) {
            std::vector<double> dw(steps);
            coarsen_increments(fine, 1024 / steps, dw);
            const auto x = solve_pathdep_bessel(1.0, d, PathFunctional::zero(), TimeGrid::uniform(1.0, steps), dw);
            const auto r = strong_residual(x, f, d, PathFunctional::zero());
            double sup = 0.0;
            for (double v : r.values) sup = std::max(sup, std::abs(v));
            (steps == 64 ? coarse_sup : fine_sup).push_back(sup);
        }
    }
    // Order 1/2 predicts a factor 4 over a 16x refinement.
    EXPECT_LT(median(fine_sup), 0.5 * median(coarse_sup));
}

TEST(ZScore, MeanOfSquareMartingaleVanishesAtEveryNode) {
    const double delta = 0.3;
    const std::size_t n = 5000, steps = 32;
    std::vector<std::vector<double>> per_node(steps + 1);
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto m = compute_Mf(exact_bes(1.0, delta, steps, derive_seed(2, k)), monomial(2), Dimension(delta));
        for (std::size_t i = 0; i <= steps; ++i) per_node[i].push_back(m.values[i]);
    }
    for (std::size_t i = 1; i <= steps; ++i) EXPECT_LT(std::abs(z_score(estimate_mean(per_node[i]))), 4.0) << i;
}

TEST(ZScore, ExactEnsemblePassesAndControlFails) {
    EnsembleOptions o;
    o.delta = 0.5;
    o.x0 = 1.0;
    o.steps = 32;
    o.paths = 20000;
    o.seed = 5;
    MartingaleStudyOptions m;
    m.f = "x2";
    const auto ok = martingale_study(o, m);
    EXPECT_TRUE(ok.report.pass) << ok.report.max_abs_z;
    EXPECT_EQ(ok.report.entries.size(), 16u);
    m.model_delta = 0.7;
    const auto control = martingale_study(o, m);
    EXPECT_FALSE(control.report.pass);
    EXPECT_GT(control.report.max_abs_z, 4.0);
}

TEST(ZScore, ZeroVarianceEntriesAreSkippedWithNote) {
    EnsembleOptions o;
    o.steps = 8;
    o.paths = 1000;
    MartingaleStudyOptions m;
    m.f = "const1";
    const auto r = martingale_study(o, m);
    for (const auto& e : r.report.entries) EXPECT_TRUE(e.skipped);
    EXPECT_TRUE(r.report.pass);
    EXPECT_FALSE(r.report.notes.empty());
}

TEST(ZScore, TooFewPathsCannotPass) {
    EnsembleOptions o;
    o.steps = 8;
    o.paths = 200;
    const auto r = martingale_study(o, MartingaleStudyOptions{});
    EXPECT_FALSE(r.report.pass);
}

TEST(ZScore, ThreadCountDoesNotChangeReport) {
    EnsembleOptions o;
    o.steps = 16;
    o.paths = 3000;
    o.threads = 1;
    MartingaleStudyOptions m;
    m.f = "bump0";
    const auto a = martingale_study(o, m).to_json().dump();
    o.threads = 3;
    EXPECT_EQ(a, martingale_study(o, m).to_json().dump());
}

TEST(ZScore, JsonCarriesMatrixAndVerdict) {
    EnsembleOptions o;
    o.steps = 8;
    o.paths = 1000;
    const auto j = martingale_study(o, MartingaleStudyOptions{}).report.to_json();
    EXPECT_TRUE(j.contains("z_matrix"));
    EXPECT_EQ(j["z_matrix"].size(), 4u);
    EXPECT_EQ(j["z_matrix"][0].size(), 4u);
    EXPECT_EQ(j["checkpoints"].size(), 5u);
    EXPECT_TRUE(j["pass"].is_boolean());
}

TEST(ZScore, CheckpointsMustBeIncreasingOnTheGrid) {
    MartingaleConfig c;
    c.checkpoints = {0.0, 0.01, 1.0};
    EXPECT_THROW(MartingaleAccumulator(10, TimeGrid::uniform(1.0, 4), c), std::invalid_argument);
}
