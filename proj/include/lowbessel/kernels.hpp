#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant; the variant is picked at
// runtime from the host CPU. Elementwise kernels are bit-identical across
// variants (no FMA contraction, IEEE sqrt). Reductions use compensated
// summation and agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace lowbessel {

/// Post-processing of an Euler step for the squared process.
enum class SchemeVariant {
    euler_full_truncation,  // S <- max(S, 0)
    euler_reflection,       // S <- |S|
    drift_implicit,         // implicit step on sqrt(S), squared back
};

std::string_view to_string(SchemeVariant v);
SchemeVariant scheme_variant_from_string(std::string_view name);

namespace kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best variant supported by this build and host.
Isa detected_isa();
/// Variant currently used by the dispatching entry points.
Isa active_isa();
/// Override the dispatch (tests, benchmarks). Requesting an unsupported
/// variant falls back to scalar. Not synchronised with concurrent callers.
void set_active_isa(Isa isa);

struct CompensatedMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

/// One Euler step of dS = drift dt + 2 sqrt(S) dW for a batch of
/// independent paths sharing the step size:
///   S <- post(S + drift*dt + 2*sqrt(max(S,0))*dW).
void besq_euler_step(std::span<double> s, std::span<const double> drift,
                     std::span<const double> dw, double dt, SchemeVariant variant);

/// out[i] = sqrt(in[i]); inputs must be non-negative.
void sqrt_elementwise(std::span<const double> in, std::span<double> out);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> x);

/// Compensated sum and sum of squares in one pass.
CompensatedMoments compensated_moments(std::span<const double> x);

namespace scalar {
void besq_euler_step(std::span<double> s, std::span<const double> drift,
                     std::span<const double> dw, double dt, SchemeVariant variant);
void sqrt_elementwise(std::span<const double> in, std::span<double> out);
double compensated_sum(std::span<const double> x);
CompensatedMoments compensated_moments(std::span<const double> x);
}  // namespace scalar

#if defined(LOWBESSEL_HAVE_AVX2)
namespace avx2 {
void besq_euler_step(std::span<double> s, std::span<const double> drift,
                     std::span<const double> dw, double dt, SchemeVariant variant);
void sqrt_elementwise(std::span<const double> in, std::span<double> out);
double compensated_sum(std::span<const double> x);
CompensatedMoments compensated_moments(std::span<const double> x);
}  // namespace avx2
#endif

}  // namespace kernels
}  // namespace lowbessel
