#pragma once

// Martingale-problem processes and ensemble tests.
//
//   M^f_t = f(X_t) - f(x0) - int_0^t L^delta f(X_s) ds - int_0^t f'(X_s) Gamma(s, X^s) ds
//
// with left-endpoint quadrature on the path's grid, the strong-form residual
// M^f - int f'(X) dW, and a z-test of E[(M_t - M_s) g(X^s)] = 0 over a basket
// of adapted statistics g.

#include "lowbessel/core.hpp"
#include "lowbessel/generator.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace lowbessel {

SamplePath compute_Mf(const SamplePath& x, const TestFunction& f, Dimension delta,
                      const PathFunctional& gamma);
SamplePath compute_Mf(const SamplePath& x, const TestFunction& f, Dimension delta);

/// R_t = M^f_t - sum_{t_i < t} f'(X_{t_i}) dW_i. Requires stored increments.
SamplePath strong_residual(const SamplePath& x, const TestFunction& f, Dimension delta,
                           const PathFunctional& gamma);

enum class AdaptedStatistic { one, value, value_squared, running_max };
inline constexpr std::array<AdaptedStatistic, 4> kDefaultBasket = {
    AdaptedStatistic::one, AdaptedStatistic::value, AdaptedStatistic::value_squared,
    AdaptedStatistic::running_max};

std::string_view to_string(AdaptedStatistic s);

struct MartingaleConfig {
    /// Checkpoint times including the endpoints; default quartiles of [0, T].
    std::vector<double> checkpoints;
    double z_threshold = 4.0;
    std::size_t min_paths = 1000;

    static MartingaleConfig quartiles(double horizon);
};

struct ZEntry {
    double s = 0.0;
    double t = 0.0;
    AdaptedStatistic statistic = AdaptedStatistic::one;
    double mean = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    bool skipped = false;
};

struct MartingaleReport {
    std::vector<ZEntry> entries;
    std::vector<double> checkpoints;
    std::size_t n_paths = 0;
    double z_threshold = 4.0;
    /// Family-wise level implied by the threshold (Bonferroni bound).
    double confidence = 0.0;
    double max_abs_z = 0.0;
    bool pass = false;
    std::vector<std::string> notes;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Collects per-path products (M_t - M_s) g(X^s). Slot k may be written
/// from any thread; distinct slots never alias.
class MartingaleAccumulator {
public:
    MartingaleAccumulator(std::size_t n_paths, const TimeGrid& grid, MartingaleConfig config);

    void record(std::size_t slot, const SamplePath& m, const SamplePath& x);
    [[nodiscard]] MartingaleReport report() const;

private:
    MartingaleConfig config_;
    std::vector<std::size_t> checkpoint_index_;
    std::size_t n_paths_;
    std::size_t n_pairs_;
    // products_[entry][slot]
    std::vector<std::vector<double>> products_;
};

/// Convenience wrapper over MartingaleAccumulator for stored ensembles.
MartingaleReport martingale_zscore(std::span<const SamplePath> m_paths,
                                   std::span<const SamplePath> x_paths,
                                   const MartingaleConfig& config);

}  // namespace lowbessel
