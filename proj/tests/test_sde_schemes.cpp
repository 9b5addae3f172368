#include "lowbessel/density.hpp"
#include "lowbessel/generator.hpp"
#include "lowbessel/sde_schemes.hpp"
#include "lowbessel/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace lowbessel;

namespace {

std::vector<double> terminal_besq(double s0, double delta, std::size_t n, std::size_t steps, std::uint64_t seed) {
    const auto grid = TimeGrid::uniform(1.0, steps);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = sample_besq_exact(s0, Dimension(delta), grid, derive_seed(seed, k)).back();
    return out;
}

}  // namespace

TEST(ExactSampler, NullProcess) {
    const auto p = sample_besq_exact(0.0, Dimension(0.0), TimeGrid::uniform(1.0, 50), 3);
    for (double v : p.values) EXPECT_EQ(v, 0.0);
    EXPECT_FALSE(p.has_noise());
}

TEST(ExactSampler, RejectsNegativeStart) {
    EXPECT_THROW(sample_besq_exact(-1.0, Dimension(0.5), TimeGrid::uniform(1.0, 4), 1), std::domain_error);
}

TEST(ExactSampler, DeterministicAndNonNegative) {
    const auto g = TimeGrid::uniform(1.0, 64);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto a = sample_besq_exact(0.3, Dimension(0.4), g, seed);
        const auto b = sample_besq_exact(0.3, Dimension(0.4), g, seed);
        EXPECT_EQ(a.values, b.values);
        for (double v : a.values) EXPECT_GE(v, 0.0);
    }
    EXPECT_NE(sample_besq_exact(1.0, Dimension(0.4), g, 1).values, sample_besq_exact(1.0, Dimension(0.4), g, 2).values);
}

TEST(ExactSampler, MeanIdentity) {
    for (double delta : {0.0, 0.5, 1.0}) {
        const auto s = terminal_besq(1.0, delta, 20000, 4, 17);
        EXPECT_LT(std::abs(z_score(estimate_mean(s), 1.0 + delta)), 4.0) << delta;
    }
}

TEST(ExactSampler, DeltaOneMatchesSquaredGaussianMoments) {
    // S_T = (x0 + sqrt(T) Z)^2: mean x0^2 + T, variance 4 x0^2 T + 2 T^2.
    const double x0 = 0.8;
    const auto s = terminal_besq(x0 * x0, 1.0, 40000, 8, 23);
    const auto m = estimate_mean(s);
    EXPECT_LT(std::abs(z_score(m, x0 * x0 + 1.0)), 4.0);
    const double var = 4.0 * x0 * x0 + 2.0;
    EXPECT_NEAR(m.stddev * m.stddev, var, 0.05 * var);
}

TEST(ExactSampler, AbsorbedAtZeroForDeltaZero) {
    const auto g = TimeGrid::uniform(2.0, 200);
    std::size_t absorbed = 0;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const auto p = sample_besq_exact(1.0, Dimension(0.0), g, derive_seed(5, k));
        const auto hit = std::find(p.values.begin(), p.values.end(), 0.0);
        if (hit == p.values.end()) continue;
        ++absorbed;
        for (auto it = hit; it != p.values.end(); ++it) ASSERT_EQ(*it, 0.0);
    }
    EXPECT_GT(absorbed, 500u);
}

TEST(ExactSampler, SquareRootMatchesDensity) {
    for (double delta : {0.3, 1.0}) {
        std::vector<double> x = terminal_besq(1.0, delta, 20000, 2, 31);
        for (auto& v : x) v = std::sqrt(v);
        const DensitySpec spec(Dimension(delta), 1.0, 1.0);
        const double ks = ks_one_sample(x, [&](std::span<const double> p) { return bes_cdf(spec, p); });
        EXPECT_LT(ks, ks_critical_one_sample(x.size(), 0.01)) << delta;
    }
}

TEST(ExactSampler, QuadraticVariationOfMeanMartingale) {
    // [M]_t = 4 int S ds for M = S - s0 - delta t.
    const double delta = 0.5;
    const auto g = TimeGrid::uniform(1.0, 256);
    std::vector<double> qv, target;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const auto p = sample_besq_exact(1.0, Dimension(delta), g, derive_seed(9, k));
        double q = 0.0, integral = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const double dm = p.values[i + 1] - p.values[i] - delta * g.dt(i);
            q += dm * dm;
            integral += 4.0 * p.values[i] * g.dt(i);
        }
        qv.push_back(q);
        target.push_back(integral);
    }
    const double a = estimate_mean(qv).mean, b = estimate_mean(target).mean;
    EXPECT_NEAR(a, b, 0.05 * b);
}

TEST(Euler, OneStepExample) {
    const auto g = TimeGrid::uniform(0.5, 1);
    const std::vector<double> dw{0.1};
    const auto p = euler_besq(1.0, bar_gamma(PathFunctional::zero(), Dimension(1.0)), g, dw,
                              SchemeVariant::euler_full_truncation);
    EXPECT_DOUBLE_EQ(p.values[1], 1.7);
    EXPECT_EQ(p.noise, dw);
}

TEST(Euler, NullProcessUnderTruncation) {
    const auto p = euler_besq(0.0, bar_gamma(PathFunctional::zero(), Dimension(0.0)), TimeGrid::uniform(1.0, 100), 4);
    for (double v : p.values) EXPECT_EQ(v, 0.0);
}

TEST(Euler, StoresIncrementsAndIsDeterministic) {
    const auto g = TimeGrid::uniform(1.0, 32);
    const auto drift = bar_gamma(PathFunctional::constant(0.2), Dimension(0.5));
    const auto a = euler_besq(1.0, drift, g, 77);
    const auto b = euler_besq(1.0, drift, g, 77);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.noise, brownian_increments(g, 77));
    EXPECT_EQ(a.seed, 77u);
}

TEST(Euler, BatchMatchesSinglePathBitForBit) {
    const auto g = TimeGrid::uniform(1.0, 40);
    PathFunctional gamma;
    gamma.evaluate = [](const PathView& v) { return 0.3 * std::sin(v.integral()) + 0.1 * v.current(); };
    const auto drift = bar_gamma(gamma, Dimension(0.4));
    std::vector<std::vector<double>> dws;
    for (std::uint64_t k = 0; k < 11; ++k) dws.push_back(brownian_increments(g, k));
    for (auto variant : {SchemeVariant::euler_full_truncation, SchemeVariant::euler_reflection, SchemeVariant::drift_implicit}) {
        const auto batch = euler_besq_batch(0.2, drift, g, dws, variant);
        for (std::size_t k = 0; k < dws.size(); ++k)
            EXPECT_EQ(batch[k].values, euler_besq(0.2, drift, g, dws[k], variant).values);
    }
}

TEST(Euler, ScalarAndVectorDispatchGiveIdenticalPaths) {
    const auto g = TimeGrid::uniform(1.0, 64);
    const auto drift = bar_gamma(PathFunctional::zero(), Dimension(0.5));
    std::vector<std::vector<double>> dws;
    for (std::uint64_t k = 0; k < 9; ++k) dws.push_back(brownian_increments(g, 100 + k));
    const auto before = kernels::active_isa();
    kernels::set_active_isa(kernels::Isa::scalar);
    const auto a = euler_besq_batch(0.1, drift, g, dws, SchemeVariant::euler_reflection);
    kernels::set_active_isa(kernels::detected_isa());
    const auto b = euler_besq_batch(0.1, drift, g, dws, SchemeVariant::euler_reflection);
    kernels::set_active_isa(before);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].values, b[k].values);
}

TEST(Euler, IncrementSizeMismatchThrows) {
    const std::vector<double> dw(3);
    EXPECT_THROW(euler_besq(1.0, PathFunctional::zero(), TimeGrid::uniform(1.0, 4), dw, SchemeVariant::euler_reflection),
                 std::invalid_argument);
}

TEST(SqrtPath, Examples) {
    const auto g = TimeGrid::uniform(1.0, 2);
    EXPECT_EQ(sqrt_path(SamplePath(g, {4, 4, 4})).values, (std::vector<double>{2, 2, 2}));
    EXPECT_EQ(sqrt_path(SamplePath(g, {0, 0, 0})).values, (std::vector<double>{0, 0, 0}));
    const auto carried = sqrt_path(SamplePath(g, {1, 4, 9}, {0.1, -0.2}));
    EXPECT_EQ(carried.noise, (std::vector<double>{0.1, -0.2}));
    EXPECT_THROW(sqrt_path(SamplePath(g, {1, -1e-3, 1})), std::domain_error);
}

TEST(Reflected, HandComputedExample) {
    const auto r = reflected_bm(0.2, TimeGrid::from_nodes({0, 1, 2}), std::vector<double>{-1.0, 0.5});
    EXPECT_EQ(r.local_time.values[0], 0.0);
    EXPECT_DOUBLE_EQ(r.local_time.values[1], 0.8);
    EXPECT_DOUBLE_EQ(r.local_time.values[2], 0.8);
    EXPECT_DOUBLE_EQ(r.x.values[1], 0.0);
    EXPECT_DOUBLE_EQ(r.x.values[2], 0.5);
}

TEST(Reflected, InactiveWhenPathStaysAbove) {
    const auto r = reflected_bm(1.0, TimeGrid::uniform(1.0, 3), std::vector<double>{0.1, -0.5, 0.2});
    for (double l : r.local_time.values) EXPECT_EQ(l, 0.0);
    EXPECT_DOUBLE_EQ(r.x.values[3], 0.8);
}

TEST(Reflected, SkorokhodProperties) {
    const auto g = TimeGrid::uniform(1.0, 500);
    for (std::uint64_t k = 0; k < 50; ++k) {
        const auto r = reflected_bm(0.1, g, k);
        double complementarity = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            EXPECT_GE(r.x.values[i], 0.0);
            if (i > 0) {
                const double dl = r.local_time.values[i] - r.local_time.values[i - 1];
                EXPECT_GE(dl, 0.0);
                complementarity += r.x.values[i] * dl;
            }
        }
        // L only grows at nodes where the reflected path sits at 0.
        EXPECT_LT(complementarity, 1e-12);
    }
}

TEST(Reflected, FoldedNormalMarginal) {
    // X_T has the law of |x0 + W_T|. The grid sup undershoots the continuous
    // one by O(sqrt(dt)), so the match is checked on a fine grid and the
    // coarse grid must be visibly worse.
    const double x0 = 0.5;
    boost::math::normal z;
    auto folded = [&](double y) { return y <= 0.0 ? 0.0 : boost::math::cdf(z, y - x0) - boost::math::cdf(z, -y - x0); };
    auto ks_at = [&](std::size_t steps, std::size_t n) {
        const auto g = TimeGrid::uniform(1.0, steps);
        std::vector<double> xt;
        for (std::uint64_t k = 0; k < n; ++k) xt.push_back(reflected_bm(x0, g, derive_seed(3, k)).x.back());
        return ks_one_sample(xt, folded);
    };
    const std::size_t n = 10000;
    const double fine = ks_at(4096, n);
    EXPECT_LT(fine, ks_critical_one_sample(n, 0.01));
    EXPECT_LT(fine, ks_at(16, n));
}

TEST(SignFlip, Examples) {
    const auto g = TimeGrid::uniform(1.0, 3);
    EXPECT_EQ(sign_flip_after_zero(SamplePath(g, {1, 0, 1, 2})).values, (std::vector<double>{1, 0, -1, -2}));
    EXPECT_EQ(sign_flip_after_zero(SamplePath(g, {1, 2, 1, 2})).values, (std::vector<double>{1, 2, 1, 2}));
    EXPECT_EQ(sign_flip_after(SamplePath(g, {1, 2, 3, 4}), 1).values, (std::vector<double>{1, 2, -3, -4}));
    EXPECT_THROW(sign_flip_after_zero(SamplePath(g, {1, -1, 1, 2})), std::domain_error);
}

TEST(BridgeZero, HittingProbabilityMatchesClosedForm) {
    // T_0 from x0 has the law x0^2 / (2 G), G ~ Gamma(1 - delta/2).
    const double x0 = 1.0;
    const std::size_t n = 20000;
    for (double delta : {0.5, 1.0}) {
        const auto g = TimeGrid::uniform(1.0, 16);
        std::size_t hits = 0;
        for (std::uint64_t k = 0; k < n; ++k) {
            const auto seed = derive_seed(41, k);
            const auto x = sqrt_path(sample_besq_exact(x0 * x0, Dimension(delta), g, seed));
            hits += first_zero_bridge(x, Dimension(delta), seed).has_value();
        }
        const double p = boost::math::gamma_q(1.0 - delta / 2.0, x0 * x0 / 2.0);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(n), p, 4.0 * se) << delta;
    }
}

TEST(BridgeZero, DeltaOneIsReflectionPrinciple) {
    const double x0 = 1.0;
    boost::math::normal z;
    const double p = 2.0 * boost::math::cdf(z, -x0);
    EXPECT_NEAR(boost::math::gamma_q(0.5, 0.5), p, 1e-14);
}

TEST(BridgeZero, ExactZeroNodeIsDetected) {
    const SamplePath x(TimeGrid::uniform(1.0, 3), {1.0, 0.5, 0.0, 0.0});
    const auto hit = first_zero_bridge(x, Dimension(0.0), 1);
    ASSERT_TRUE(hit);
    EXPECT_LE(*hit, 1u);
}

TEST(Lamperti, StaysAtOriginWhenStartedThere) {
    for (double delta : {0.0, 0.5}) {
        const auto y = lamperti_sde(0.0, Dimension(delta), TimeGrid::uniform(1.0, 100), 8);
        for (double v : y.values) EXPECT_EQ(v, 0.0);
    }
}

TEST(Lamperti, StepUsesSigma0) {
    const Dimension d(0.5);
    const auto y = lamperti_sde(0.7, d, TimeGrid::uniform(1.0, 50), 12);
    for (std::size_t i = 0; i + 1 < y.size(); ++i)
        EXPECT_DOUBLE_EQ(y.values[i + 1], y.values[i] + sigma0(d, y.values[i]) * y.noise[i]);
    EXPECT_THROW(lamperti_sde(0.0, Dimension(2.0), TimeGrid::uniform(1.0, 2), 1), std::domain_error);
}
