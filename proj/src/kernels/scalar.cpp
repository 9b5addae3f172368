#include "lowbessel/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace lowbessel::kernels::scalar {

namespace {

inline void neumaier_add(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
    else
        comp += (x - t) + sum;
    sum = t;
}

}  // namespace

void besq_euler_step(std::span<double> s, std::span<const double> drift,
                     std::span<const double> dw, double dt, SchemeVariant variant) {
    if (drift.size() != s.size() || dw.size() != s.size())
        throw std::invalid_argument("besq_euler_step: size mismatch");
    const std::size_t n = s.size();
    switch (variant) {
        case SchemeVariant::euler_full_truncation:
            for (std::size_t i = 0; i < n; ++i) {
                const double root = std::sqrt(s[i] > 0.0 ? s[i] : 0.0);
                const double next = s[i] + drift[i] * dt + 2.0 * root * dw[i];
                s[i] = next > 0.0 ? next : 0.0;
            }
            break;
        case SchemeVariant::euler_reflection:
            for (std::size_t i = 0; i < n; ++i) {
                const double root = std::sqrt(s[i] > 0.0 ? s[i] : 0.0);
                const double next = s[i] + drift[i] * dt + 2.0 * root * dw[i];
                s[i] = std::abs(next);
            }
            break;
        case SchemeVariant::drift_implicit:
            // Y = sqrt(S) solves dY = (drift - 1)/(2Y) dt + dW; implicit in the
            // drift: Y' = (a + sqrt(a^2 + 2 (drift - 1) dt)) / 2, a = Y + dW.
            for (std::size_t i = 0; i < n; ++i) {
                const double y = std::sqrt(s[i] > 0.0 ? s[i] : 0.0);
                const double a = y + dw[i];
                const double disc = a * a + 2.0 * (drift[i] - 1.0) * dt;
                const double y1 = 0.5 * (a + std::sqrt(disc > 0.0 ? disc : 0.0));
                s[i] = y1 * y1;
            }
            break;
    }
}

void sqrt_elementwise(std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size()) throw std::invalid_argument("sqrt_elementwise: size mismatch");
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::sqrt(in[i]);
}

double compensated_sum(std::span<const double> x) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : x) neumaier_add(sum, comp, v);
    return sum + comp;
}

CompensatedMoments compensated_moments(std::span<const double> x) {
    double s1 = 0.0, c1 = 0.0, s2 = 0.0, c2 = 0.0;
    for (double v : x) {
        neumaier_add(s1, c1, v);
        neumaier_add(s2, c2, v * v);
    }
    return {s1 + c1, s2 + c2};
}

}  // namespace lowbessel::kernels::scalar
