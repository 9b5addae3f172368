#include "lowbessel/generator.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lowbessel {

namespace {

constexpr double kLimitTol = 1e-6;
constexpr double kSlopeTol = 1e-9;

double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

void require_low_dim(Dimension delta, const char* who) {
    if (!delta.low_dim())
        throw std::domain_error(std::string(who) + ": delta must lie in [0, 1]");
}

struct Limit {
    std::optional<double> value;
    bool borderline = false;
};

// Probes fn(sign * 10^{-k}), k = 2..8. With `richardson`, successive
// estimates (10 v_{k+1} - v_k) / 9 remove the linear term in h first.
Limit one_sided_limit(const std::function<double(double)>& fn, double sign, bool richardson) {
    std::array<double, 7> v{};
    for (int k = 2; k <= 8; ++k) {
        const double x = sign * std::pow(10.0, -k);
        double y;
        try {
            y = fn(x);
        } catch (const std::exception&) {
            return {};
        }
        if (!std::isfinite(y)) return {};
        v[static_cast<std::size_t>(k - 2)] = y;
    }
    double last, prev;
    if (richardson) {
        prev = (10.0 * v[5] - v[4]) / 9.0;
        last = (10.0 * v[6] - v[5]) / 9.0;
    } else {
        prev = v[5];
        last = v[6];
    }
    const double gap = std::abs(last - prev);
    const double scale = std::max(1.0, std::abs(last));
    if (gap > kLimitTol * scale) return {std::nullopt, gap < 10.0 * kLimitTol * scale};
    return {last, gap > 0.1 * kLimitTol * scale};
}

bool agree(double a, double b) {
    return std::abs(a - b) <= kLimitTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

bool finite_off_origin(const TestFunction& f) {
    for (int k = -8; k <= 1; ++k) {
        for (double s : {-1.0, 1.0}) {
            const double x = s * std::pow(10.0, k);
            try {
                if (!std::isfinite(f.f1(x)) || !std::isfinite(f.f2(x))) return false;
            } catch (const std::exception&) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

std::string_view to_string(Membership m) {
    switch (m) {
        case Membership::core_domain: return "core_domain";
        case Membership::extended_domain: return "extended_domain";
        case Membership::rejected: return "rejected";
    }
    return "?";
}

TestFunction monomial(int degree) {
    if (degree < 0) throw std::domain_error("monomial: negative degree");
    const double k = degree;
    TestFunction t;
    t.f = [k](double x) { return std::pow(x, k); };
    t.f1 = [k](double x) { return k == 0 ? 0.0 : k * std::pow(x, k - 1); };
    t.f2 = [k](double x) { return k < 2 ? 0.0 : k * (k - 1) * std::pow(x, k - 2); };
    t.label = degree == 1 ? "x" : "x" + std::to_string(degree);
    t.membership = degree == 1 ? Membership::rejected : Membership::core_domain;
    return t;
}

TestFunction constant_function(double c) {
    return TestFunction{[c](double) { return c; }, [](double) { return 0.0; },
                        [](double) { return 0.0; }, "const", Membership::core_domain};
}

TestFunction bump_function(double radius) {
    if (!(radius > 0.0)) throw std::domain_error("bump_function: radius must be positive");
    const double r2 = radius * radius;
    auto f = [r2](double x) {
        const double u = 1.0 - x * x / r2;
        return u > 0.0 ? std::exp(1.0 - 1.0 / u) : 0.0;
    };
    TestFunction t;
    t.f = f;
    t.f1 = [f, r2](double x) {
        const double u = 1.0 - x * x / r2;
        return u > 0.0 ? f(x) * (-2.0 * x / (r2 * u * u)) : 0.0;
    };
    t.f2 = [f, r2](double x) {
        const double u = 1.0 - x * x / r2;
        if (!(u > 0.0)) return 0.0;
        const double a = -2.0 * x / (r2 * u * u);
        const double da = -2.0 / (r2 * u * u) - 8.0 * x * x / (r2 * r2 * u * u * u);
        return f(x) * (a * a + da);
    };
    t.label = "bump0";
    t.membership = Membership::core_domain;
    return t;
}

TestFunction harmonic_function(Dimension delta) {
    require_low_dim(delta, "harmonic_function");
    const double d = delta.delta;
    TestFunction t;
    t.f = [delta](double x) { return harmonic_h(delta, x); };
    t.f1 = [delta](double x) { return harmonic_h_prime(delta, x); };
    t.f2 = [d](double x) {
        if (d == 1.0) return 0.0;
        if (x == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return (1.0 - d) * sgn(x) * std::pow(std::abs(x), -d);
    };
    t.label = "harmonic";
    // For delta = 1, h(x) = x: g = 1 and G = 0 extend trivially.
    t.membership = Membership::extended_domain;
    return t;
}

TestFunction linear_combination(double a, const TestFunction& f, double b, const TestFunction& g) {
    TestFunction t;
    t.f = [a, b, ff = f.f, gf = g.f](double x) { return a * ff(x) + b * gf(x); };
    t.f1 = [a, b, ff = f.f1, gf = g.f1](double x) { return a * ff(x) + b * gf(x); };
    t.f2 = [a, b, ff = f.f2, gf = g.f2](double x) { return a * ff(x) + b * gf(x); };
    t.label = f.label + "+" + g.label;
    t.membership = std::max(f.membership, g.membership);
    return t;
}

TestFunction catalog_function(std::string_view name, Dimension delta) {
    if (name == "x2") return monomial(2);
    if (name == "x3") return monomial(3);
    if (name == "x4") return monomial(4);
    if (name == "x") return monomial(1);
    if (name == "const1") return constant_function(1.0);
    if (name == "bump0") return bump_function(2.0);
    if (name == "harmonic") return harmonic_function(delta);
    throw std::invalid_argument("unknown test function: " + std::string(name));
}

std::vector<std::string> catalog_names() {
    return {"x2", "x4", "bump0", "harmonic", "const1", "x", "x3"};
}

double apply_L(const TestFunction& f, Dimension delta, double x) {
    require_low_dim(delta, "apply_L");
    const double d = delta.delta;
    switch (f.membership) {
        case Membership::rejected:
            throw std::domain_error("apply_L: " + f.label + " is not in the domain of L");
        case Membership::core_domain:
            if (x == 0.0) return d == 0.0 ? 0.0 : 0.5 * d * f.f2(0.0);
            return 0.5 * f.f2(x) + (d - 1.0) * f.f1(x) / (2.0 * x);
        case Membership::extended_domain:
            break;
    }
    auto big_g = [&](double y) { return f.f2(y) + (d - 1.0) * f.f1(y) / y; };
    if (x != 0.0) return 0.5 * big_g(x);
    const auto right = one_sided_limit(big_g, 1.0, false);
    const auto left = one_sided_limit(big_g, -1.0, false);
    if (!right.value || !left.value || !agree(*right.value, *left.value))
        throw std::domain_error("apply_L: G has no continuous extension at 0 for " + f.label);
    return 0.25 * (*right.value + *left.value);
}

DomainReport check_domain(const TestFunction& f, Dimension delta) {
    DomainReport r;
    const double d = delta.delta;
    try {
        r.f1_at_zero = f.f1(0.0);
    } catch (const std::exception& e) {
        r.diagnostic = std::string("f' fails at 0: ") + e.what();
        return r;
    }

    const auto f2r = one_sided_limit(f.f2, 1.0, true);
    const auto f2l = one_sided_limit(f.f2, -1.0, true);
    r.f2_right = f2r.value;
    r.f2_left = f2l.value;
    r.borderline = f2r.borderline || f2l.borderline;
    const bool slope_ok = std::isfinite(r.f1_at_zero) && std::abs(r.f1_at_zero) <= kSlopeTol;
    if (slope_ok && f2r.value && f2l.value && (d == 0.0 || agree(*f2r.value, *f2l.value))) {
        r.membership = Membership::core_domain;
        r.diagnostic = "f'(0) = 0 and f'' has one-sided limits at 0";
        return r;
    }

    if (!finite_off_origin(f)) {
        r.diagnostic = "f' or f'' not finite away from 0";
        return r;
    }
    auto g = [&](double x) { return f.f1(x) * std::pow(std::abs(x), d - 1.0); };
    auto big_g = [&](double x) { return f.f2(x) + (d - 1.0) * f.f1(x) / x; };
    const auto gr = one_sided_limit(g, 1.0, false), gl = one_sided_limit(g, -1.0, false);
    const auto Gr = one_sided_limit(big_g, 1.0, false), Gl = one_sided_limit(big_g, -1.0, false);
    r.borderline = r.borderline || gr.borderline || gl.borderline || Gr.borderline || Gl.borderline;
    if (gr.value && gl.value && agree(*gr.value, *gl.value) && Gr.value && Gl.value &&
        agree(*Gr.value, *Gl.value)) {
        r.membership = Membership::extended_domain;
        r.g_at_zero = *gr.value;
        r.G_at_zero = *Gr.value;
        r.diagnostic = "g and G extend continuously to 0";
        return r;
    }
    r.diagnostic = slope_ok ? "f'' has no admissible one-sided limits at 0"
                            : "f'(0) != 0 and g = f'|x|^{delta-1} does not extend continuously";
    return r;
}

double harmonic_h(Dimension delta, double x) {
    require_low_dim(delta, "harmonic_h");
    const double e = 2.0 - delta.delta;
    return sgn(x) * std::pow(std::abs(x), e) / e;
}

double harmonic_h_inverse(Dimension delta, double y) {
    require_low_dim(delta, "harmonic_h_inverse");
    const double e = 2.0 - delta.delta;
    return sgn(y) * std::pow(e * std::abs(y), 1.0 / e);
}

double harmonic_h_prime(Dimension delta, double x) {
    require_low_dim(delta, "harmonic_h_prime");
    return std::pow(std::abs(x), 1.0 - delta.delta);
}

double sigma0(Dimension delta, double y) {
    require_low_dim(delta, "sigma0");
    const double d = delta.delta;
    const double a = (1.0 - d) / (2.0 - d);
    return sgn(y) * std::pow(2.0 - d, a) * std::pow(std::abs(y), a);
}

EngelbertSchmidtResult engelbert_schmidt(Dimension delta, double eps) {
    require_low_dim(delta, "engelbert_schmidt");
    if (!(eps > 0.0)) throw std::domain_error("engelbert_schmidt: eps must be positive");
    const double d = delta.delta;
    EngelbertSchmidtResult r;
    r.exponent = (2.0 * d - 2.0) / (2.0 - d);
    if (r.exponent <= -1.0) {
        r.diverges = true;
        return r;
    }
    const double scale = 1.0 / std::pow(2.0 - d, (2.0 - 2.0 * d) / (2.0 - d));
    r.value = scale * std::pow(eps, r.exponent + 1.0) / (r.exponent + 1.0);
    return r;
}

}  // namespace lowbessel
