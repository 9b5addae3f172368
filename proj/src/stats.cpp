#include "lowbessel/stats.hpp"

#include "lowbessel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lowbessel {

MeanEstimate estimate_mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("estimate_mean: empty sample");
    const auto m = kernels::compensated_moments(x);
    const double n = static_cast<double>(x.size());
    MeanEstimate out;
    out.n = x.size();
    out.mean = m.sum / n;
    if (x.size() > 1) {
        const double var = std::max(0.0, (m.sum_sq - n * out.mean * out.mean) / (n - 1.0));
        out.stddev = std::sqrt(var);
        out.std_error = out.stddev / std::sqrt(n);
    }
    return out;
}

double z_score(const MeanEstimate& m, double target) {
    const double diff = m.mean - target;
    if (m.std_error > 0.0) return diff / m.std_error;
    if (diff == 0.0) return 0.0;
    return diff > 0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
}

double ks_one_sample(std::span<const double> samples, const BatchCdf& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> unique;
    std::vector<std::size_t> upto;  // count of samples <= unique[k]
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (unique.empty() || sorted[i] != unique.back()) {
            unique.push_back(sorted[i]);
            upto.push_back(i + 1);
        } else {
            upto.back() = i + 1;
        }
    }
    const auto f = cdf(unique);
    if (f.size() != unique.size()) throw std::logic_error("ks_one_sample: cdf size mismatch");
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    std::size_t below = 0;
    for (std::size_t k = 0; k < unique.size(); ++k) {
        const double fn_left = static_cast<double>(below) / n;
        const double fn_right = static_cast<double>(upto[k]) / n;
        d = std::max({d, std::abs(fn_left - f[k].left), std::abs(fn_right - f[k].right)});
        below = upto[k];
    }
    return d;
}

double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
    return ks_one_sample(samples, BatchCdf([&](std::span<const double> ys) {
                             std::vector<CdfPoint> out(ys.size());
                             for (std::size_t i = 0; i < ys.size(); ++i) {
                                 const double v = cdf(ys[i]);
                                 out[i] = {v, v};
                             }
                             return out;
                         }));
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() || j < sb.size()) {
        double y;
        if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j]))
            y = sa[i];
        else
            y = sb[j];
        while (i < sa.size() && sa[i] == y) ++i;
        while (j < sb.size() && sb[j] == y) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_one_sample(std::size_t n, double alpha) {
    if (n == 0 || !(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("ks_critical_one_sample: bad arguments");
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
    if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("ks_critical_two_sample: bad arguments");
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace lowbessel
