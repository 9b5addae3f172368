#pragma once

// The Bessel generator L^delta f = f''/2 + (delta - 1) f' / (2x) on its
// domain, the numerical domain-membership probe, the harmonic function h,
// the Lamperti coefficient sigma_0 and the Engelbert-Schmidt test.

#include "lowbessel/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lowbessel {

enum class Membership { core_domain, extended_domain, rejected };

std::string_view to_string(Membership m);

/// A scalar test function with its first two derivatives. f2 may have
/// different one-sided limits at 0; `membership` is the declared class.
struct TestFunction {
    std::function<double(double)> f;
    std::function<double(double)> f1;
    std::function<double(double)> f2;
    std::string label;
    Membership membership = Membership::core_domain;
};

/// Catalogue entries: "x2", "x4", "bump0", "harmonic" (delta-dependent),
/// plus "const1", "x" and "x3".
TestFunction catalog_function(std::string_view name, Dimension delta);
std::vector<std::string> catalog_names();

TestFunction monomial(int degree);
TestFunction constant_function(double c);
/// exp(1 - 1/(1 - (x/R)^2)) on |x| < R, 0 elsewhere; f(0) = 1, f'(0) = 0.
TestFunction bump_function(double radius = 2.0);
TestFunction harmonic_function(Dimension delta);

/// Pointwise linear combination a*f + b*g (membership of the weaker one).
TestFunction linear_combination(double a, const TestFunction& f, double b, const TestFunction& g);

/// L^delta f(x). Core-domain functions use the piecewise formula with
/// delta f''(0)/2 at the origin (0 when delta = 0); extended-domain
/// functions use the continuous extension of G/2 at the origin.
/// Throws std::domain_error for rejected functions or delta outside [0, 1].
double apply_L(const TestFunction& f, Dimension delta, double x);

struct DomainReport {
    Membership membership = Membership::rejected;
    std::string diagnostic;
    bool borderline = false;
    double f1_at_zero = 0.0;
    std::optional<double> f2_left;   // one-sided limits at 0
    std::optional<double> f2_right;
    std::optional<double> g_at_zero;  // continuous extensions when they exist
    std::optional<double> G_at_zero;
};

/// Numerical membership probe. Core domain: f'(0) = 0 and f'' has one-sided
/// limits at 0 (equal when delta > 0). Extended domain: g = f'|x|^{delta-1}
/// and G = g'|x|^{1-delta} extend continuously to 0.
DomainReport check_domain(const TestFunction& f, Dimension delta);

/// h(x) = sgn(x) |x|^{2-delta} / (2 - delta).
double harmonic_h(Dimension delta, double x);
double harmonic_h_inverse(Dimension delta, double y);
/// h'(x) = |x|^{1-delta} = exp(-Sigma(x)).
double harmonic_h_prime(Dimension delta, double x);

/// sigma_0(y) = sgn(y) (2 - delta)^{(1-delta)/(2-delta)} |y|^{(1-delta)/(2-delta)}.
double sigma0(Dimension delta, double y);

struct EngelbertSchmidtResult {
    bool diverges = false;
    double exponent = 0.0;          // of y in the integrand
    std::optional<double> value;    // scaled integral when finite
};

/// Whether (2-delta)^{-(2-2delta)/(2-delta)} int_0^eps y^{(2delta-2)/(2-delta)} dy
/// diverges, and its value otherwise.
EngelbertSchmidtResult engelbert_schmidt(Dimension delta, double eps);

}  // namespace lowbessel
