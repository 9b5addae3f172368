#include "lowbessel/density.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lowbessel {

namespace {

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

// Order used by the series: I_{-n} = I_n for integer n.
double effective_order(double nu) { return (nu < 0.0 && nu == std::floor(nu)) ? -nu : nu; }

void check_order(double nu, double z) {
    if (!(nu >= kBesselNuMin && nu <= kBesselNuMax))
        throw std::domain_error("bessel_I: order " + std::to_string(nu) + " outside supported range");
    if (!(z >= 0.0)) throw std::domain_error("bessel_I: argument must be >= 0");
}

}  // namespace

double gamma_fn(double a) {
    if (is_nonpositive_integer(a)) throw std::domain_error("gamma_fn: pole");
    if (a < 0.5) {
        // Reflection: Gamma(a) Gamma(1 - a) = pi / sin(pi a).
        return std::numbers::pi / (std::sin(std::numbers::pi * a) * gamma_fn(1.0 - a));
    }
    const double x = a - 1.0;
    double acc = kLanczos[0];
    const double tt = x + 7.5;
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(tt, x + 0.5) * std::exp(-tt) * acc;
}

double reciprocal_gamma(double a) {
    if (is_nonpositive_integer(a)) return 0.0;
    return 1.0 / gamma_fn(a);
}

namespace detail {

double bessel_I_series_scaled(double nu, double z) {
    nu = effective_order(nu);
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const double half = 0.5 * z;
    const double q = half * half;
    double term = std::pow(half, nu) * reciprocal_gamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * (static_cast<double>(k) + nu));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum * std::exp(-z);
}

double bessel_I_asymptotic_scaled(double nu, double z) {
    // e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k. The series
    // depends on nu^2 only; for negative non-integer nu the difference
    // I_nu - I_{-nu} is O(e^{-2z}) relative and below double precision here.
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (static_cast<double>(k) * 8.0 * z);
        if (std::abs(term) >= prev) break;  // asymptotic series starts diverging
        sum += term;
        prev = std::abs(term);
        if (prev <= 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace detail

double bessel_I_scaled(double nu, double z) {
    check_order(nu, z);
    if (z <= kBesselCrossover) return detail::bessel_I_series_scaled(nu, z);
    return detail::bessel_I_asymptotic_scaled(nu, z);
}

double bessel_I(double nu, double z) {
    check_order(nu, z);
    if (z <= kBesselCrossover) {
        const double v = detail::bessel_I_series_scaled(nu, z);
        return std::isinf(v) ? v : v * std::exp(z);
    }
    return detail::bessel_I_asymptotic_scaled(nu, z) * std::exp(z);
}

DensitySpec::DensitySpec(Dimension d, double x0_, double t_) : delta(d), x0(x0_), t(t_) {
    if (!(x0 >= 0.0)) throw std::domain_error("DensitySpec: x0 must be >= 0");
    if (!(t > 0.0)) throw std::domain_error("DensitySpec: t must be > 0");
    if (delta.delta == 0.0 && x0 == 0.0)
        throw std::domain_error("DensitySpec: BES^0 from 0 is the null process and has no density");
}

double bes_density(const DensitySpec& spec, double y) {
    if (!(y >= 0.0)) throw std::domain_error("bes_density: y must be >= 0");
    const double nu = spec.nu();
    const double t = spec.t;
    if (spec.x0 == 0.0) {
        // 2^{-nu} t^{-(nu+1)} / Gamma(nu+1) y^{2nu+1} exp(-y^2 / 2t)
        const double power = 2.0 * nu + 1.0;
        if (y == 0.0) {
            if (power > 0.0) return 0.0;
            if (power < 0.0) return std::numeric_limits<double>::infinity();
        }
        return std::pow(2.0, -nu) * std::pow(t, -(nu + 1.0)) * reciprocal_gamma(nu + 1.0) *
               std::pow(y, power) * std::exp(-y * y / (2.0 * t));
    }
    const double x0 = spec.x0;
    if (y == 0.0) {
        // Leading behaviour y^{2nu+1} (2t)^{-nu} / (t Gamma(nu+1)) e^{-x0^2/2t}.
        if (nu == -1.0) return 0.0;
        const double power = 2.0 * nu + 1.0;
        if (power > 0.0) return 0.0;
        if (power < 0.0) return std::numeric_limits<double>::infinity();
        return std::pow(2.0 * t, -nu) / t * reciprocal_gamma(nu + 1.0) *
               std::exp(-x0 * x0 / (2.0 * t));
    }
    const double z = x0 * y / t;
    const double diff = x0 - y;
    return (y / t) * std::pow(y / x0, nu) * std::exp(-diff * diff / (2.0 * t)) *
           bessel_I_scaled(nu, z);
}

double bes_atom_at_zero(const DensitySpec& spec) {
    if (spec.delta.delta != 0.0) return 0.0;
    return std::exp(-spec.x0 * spec.x0 / (2.0 * spec.t));
}

namespace {

// Integration runs in v = y^{power_inv}; for delta in (0,1) the choice
// power_inv = delta turns the y^{delta-1} singularity at 0 into a smooth
// integrand.
struct CdfIntegrand {
    const DensitySpec& spec;
    double power_inv;

    [[nodiscard]] double y_of(double v) const { return power_inv == 1.0 ? v : std::pow(v, 1.0 / power_inv); }
    [[nodiscard]] double v_of(double y) const { return power_inv == 1.0 ? y : std::pow(y, power_inv); }

    double operator()(double v) const {
        if (power_inv == 1.0) return bes_density(spec, v);
        const double y = y_of(v);
        const double jac = (1.0 / power_inv) * std::pow(v, 1.0 / power_inv - 1.0);
        return bes_density(spec, y) * jac;
    }
};

CdfIntegrand make_integrand(const DensitySpec& spec) {
    const double d = spec.delta.delta;
    return CdfIntegrand{spec, (d > 0.0 && d < 1.0) ? d : 1.0};
}

double integrate_segment(const CdfIntegrand& f, double va, double vb, double h) {
    using boost::math::quadrature::gauss;
    const double len = vb - va;
    if (len <= 0.0) return 0.0;
    const auto pieces = static_cast<std::size_t>(std::ceil(len / h));
    const double step = len / static_cast<double>(pieces);
    double acc = 0.0;
    for (std::size_t k = 0; k < pieces; ++k) {
        const double a = va + step * static_cast<double>(k);
        const double b = (k + 1 == pieces) ? vb : a + step;
        acc += gauss<double, 10>::integrate(f, a, b);
    }
    return acc;
}

double segment_scale(const CdfIntegrand& f) {
    return 0.01 * f.v_of(f.spec.x0 + std::sqrt(f.spec.t));
}

}  // namespace

std::vector<CdfPoint> bes_cdf(const DensitySpec& spec, std::span<const double> sorted_points) {
    const auto f = make_integrand(spec);
    const double h = segment_scale(f);
    const double atom = bes_atom_at_zero(spec);
    std::vector<CdfPoint> out(sorted_points.size());
    double acc = 0.0, comp = 0.0;  // Neumaier running integral
    double prev_v = 0.0;
    double prev_y = -1.0;
    for (std::size_t i = 0; i < sorted_points.size(); ++i) {
        const double y = sorted_points[i];
        if (!(y > prev_y)) throw std::invalid_argument("bes_cdf: points must be strictly increasing");
        prev_y = y;
        if (y < 0.0) {
            out[i] = {0.0, 0.0};
            continue;
        }
        const double v = f.v_of(y);
        const double piece = integrate_segment(f, prev_v, v, h);
        const double tsum = acc + piece;
        comp += std::abs(acc) >= std::abs(piece) ? (acc - tsum) + piece : (piece - tsum) + acc;
        acc = tsum;
        prev_v = v;
        const double cont = acc + comp;
        out[i] = {y == 0.0 ? 0.0 : atom + cont, atom + cont};
    }
    return out;
}

double bes_cdf(const DensitySpec& spec, double y) {
    const double pts[1] = {y};
    return bes_cdf(spec, pts)[0].right;
}

double bes_total_mass(const DensitySpec& spec) {
    const auto f = make_integrand(spec);
    const double y_max = spec.x0 + 40.0 * std::sqrt(spec.t);
    return integrate_segment(f, 0.0, f.v_of(y_max), segment_scale(f));
}

double weighted_time_integral(Dimension delta, double x0, double horizon, double x) {
    if (!(x > 0.0)) throw std::domain_error("weighted_time_integral: x must be > 0");
    if (!(horizon > 0.0)) throw std::domain_error("weighted_time_integral: T must be > 0");
    if (!(x0 >= 0.0)) throw std::domain_error("weighted_time_integral: x0 must be >= 0");
    if (delta.delta == 0.0 && x0 == 0.0)
        throw std::domain_error("weighted_time_integral: BES^0 from 0 has no density");
    // s = x^2 / t on a log scale: t = x^2 e^{-v}, dt = t dv. The factor
    // exp(-x^2 / 2t) = exp(-s/2) is negligible once s > kSMax, and unit
    // pieces in v keep every subinterval smooth whatever the size of x.
    constexpr double kSMax = 1500.0;
    const double scale = std::pow(x, 1.0 - delta.delta);
    const double x2 = x * x;
    auto integrand = [&](double v) {
        const double t = x2 * std::exp(-v);
        return bes_density(DensitySpec(delta, x0, t), x) * t;
    };
    const double v_lo = std::log(x2 / horizon);
    const double v_hi = std::max(v_lo, std::log(kSMax));
    double value = 0.0, error = 0.0;
    for (double a = v_lo; a < v_hi; a += 1.0) {
        const double b = std::min(a + 1.0, v_hi);
        double piece_error = 0.0;
        value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 8, 1e-13,
                                                                                &piece_error);
        error += piece_error;
    }
    if (!std::isfinite(value) || error > 1e-8 * std::max(std::abs(value), 1e-300) + 1e-15)
        throw std::runtime_error("weighted_time_integral: quadrature did not converge (error " +
                                 std::to_string(error) + ", value " + std::to_string(value) + ")");
    return scale * value;
}

double origin_occupation_limit(Dimension delta, double t) {
    if (!(delta.delta > 0.0)) throw std::domain_error("origin_occupation_limit: delta must be > 0");
    if (!(t > 0.0)) throw std::domain_error("origin_occupation_limit: t must be > 0");
    const double d = delta.delta;
    return std::pow(2.0, 2.0 - 0.5 * d) * reciprocal_gamma(0.5 * d) * std::pow(t, 1.0 - 0.5 * d) /
           (2.0 - d);
}

}  // namespace lowbessel
