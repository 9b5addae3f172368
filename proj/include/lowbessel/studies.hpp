#pragma once

// Ensemble experiments shared by the command-line tool and the acceptance
// runner. Path k of an ensemble always uses the seed derive_seed(seed, k),
// and per-path results land in slot k, so every result is independent of
// the thread count.

#include "lowbessel/core.hpp"
#include "lowbessel/kernels.hpp"
#include "lowbessel/martingale.hpp"
#include "lowbessel/random.hpp"
#include "lowbessel/stats.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lowbessel {

struct EnsembleOptions {
    double delta = 0.5;
    double x0 = 1.0;
    double horizon = 1.0;
    std::size_t steps = 128;
    std::size_t paths = 10000;
    std::uint64_t seed = 42;
    std::size_t threads = 1;
};

/// Terminal values X_T of exactly sampled BES^delta(x0) paths.
std::vector<double> exact_terminal_values(const EnsembleOptions& o, Stream stream = Stream::brownian);

struct MeanIdentityResult {
    MeanEstimate s_terminal;
    double target = 0.0;  // x0^2 + delta T
    double z = 0.0;
    bool pass = false;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// E S_T = x0^2 + delta T over exact paths; pass iff |z| < 3.
MeanIdentityResult mean_identity_study(const EnsembleOptions& o);

struct DensityCheckResult {
    double ks = 0.0;
    double critical = 0.0;
    bool exact_zero_check = false;  // delta = 0, x0 = 0: every path must be identically 0
    std::size_t nonzero_values = 0;
    bool pass = false;
    /// (y, empirical cdf, model cdf) at empirical deciles.
    std::vector<std::array<double, 3>> table;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// One-sample KS of exact X_T against the transition density.
DensityCheckResult density_check(const EnsembleOptions& o, double alpha = 0.01);

struct MartingaleStudyOptions {
    std::string f = "x2";
    /// Constant drift Gamma; 0 samples exactly, otherwise the Euler solver.
    double gamma = 0.0;
    /// Dimension used in the generator (negative control when != delta).
    std::optional<double> model_delta;
    /// Negate each path after its first zero (bridge-detected).
    bool flip_after_zero = false;
    MartingaleConfig config;
};

struct MartingaleStudyResult {
    MartingaleReport report;
    MeanEstimate x_terminal;
    std::size_t flipped_paths = 0;
    [[nodiscard]] nlohmann::json to_json() const;
};

MartingaleStudyResult martingale_study(const EnsembleOptions& o, const MartingaleStudyOptions& m);

struct NonUniquenessResult {
    MartingaleStudyResult plain;
    MartingaleStudyResult flipped;
    double mean_gap = 0.0;
    double gap_std_error = 0.0;
    double gap_z = 0.0;
    bool pass = false;  // flipped passes the martingale test and |gap_z| > 5
    [[nodiscard]] nlohmann::json to_json() const;
};

NonUniquenessResult nonuniqueness_study(const EnsembleOptions& o, const std::string& f);

struct AbsorptionResult {
    std::size_t absorbed = 0;
    std::size_t violations = 0;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// For delta = 0: counts paths that reach exactly 0 and leave it again.
AbsorptionResult absorption_check(const EnsembleOptions& o);

struct GirsanovStudyResult {
    MeanEstimate direct;
    double reweighted = 0.0;
    double reweighted_std_error = 0.0;
    double stderr_combined = 0.0;
    double ess = 0.0;
    double z = 0.0;
    bool pass = false;  // |z| < 3
    std::vector<std::string> warnings;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// E[X_T] under constant drift gamma: direct Euler simulation against the
/// Novikov-reweighted driftless ensemble (independent noise).
GirsanovStudyResult girsanov_study(const EnsembleOptions& o, double gamma,
                                   SchemeVariant variant = SchemeVariant::euler_full_truncation);

struct SchemeConsistencyResult {
    std::vector<std::size_t> steps;
    std::vector<double> ks;
    std::vector<double> ratios;  // ks[l+1] / ks[l]
    double ratio_low = 0.25;
    double ratio_high = 0.75;
    bool pass = false;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Two-sample KS between Euler (Gamma = 0) and exact terminal values on
/// each grid; all grids share one Brownian path per sample.
SchemeConsistencyResult scheme_consistency_study(const EnsembleOptions& o,
                                                 const std::vector<std::size_t>& steps,
                                                 SchemeVariant variant);

struct RadialStudyResult {
    double ks = 0.0;
    double critical = 0.0;
    bool pass = false;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Two-sample KS between |Y_T| of the radial oracle and the path-dependent
/// solver, both with constant drift gamma.
RadialStudyResult radial_study(const EnsembleOptions& o, double gamma, double alpha = 0.01);

struct LimitRow {
    double x = 0.0;
    double value = 0.0;
    double limit = 0.0;    // closed form for x0 = 0, otherwise 0
    double rel_err = 0.0;  // |value - limit| / limit; absolute when the limit is 0
};

struct LimitStudyResult {
    std::vector<LimitRow> rows;
    std::optional<double> limit;  // x0 = 0 only
    double rel_error = 0.0;       // at x = 1e-4, x0 = 0
    double decay_ratio = 0.0;     // value(1e-4) / value(0.1), x0 > 0
    bool pass = false;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// x0 = 0: value at 1e-4 within 1% of the closed-form limit.
/// x0 > 0: value at 1e-4 below 1e-2 times the value at 0.1.
LimitStudyResult limit_study(double delta, double x0, double horizon);

}  // namespace lowbessel
