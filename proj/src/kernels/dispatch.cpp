#include "lowbessel/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace lowbessel {

std::string_view to_string(SchemeVariant v) {
    switch (v) {
        case SchemeVariant::euler_full_truncation: return "truncation";
        case SchemeVariant::euler_reflection: return "reflection";
        case SchemeVariant::drift_implicit: return "implicit";
    }
    return "?";
}

SchemeVariant scheme_variant_from_string(std::string_view name) {
    if (name == "truncation" || name == "euler_full_truncation")
        return SchemeVariant::euler_full_truncation;
    if (name == "reflection" || name == "euler_reflection") return SchemeVariant::euler_reflection;
    if (name == "implicit" || name == "drift_implicit") return SchemeVariant::drift_implicit;
    throw std::invalid_argument("unknown scheme variant: " + std::string(name));
}

namespace kernels {

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
#if defined(LOWBESSEL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
    return Isa::scalar;
}

namespace {

Isa initial_isa() {
    if (const char* env = std::getenv("LOWBESSEL_ISA"); env && std::string(env) == "scalar")
        return Isa::scalar;
    return detected_isa();
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
}

void besq_euler_step(std::span<double> s, std::span<const double> drift,
                     std::span<const double> dw, double dt, SchemeVariant variant) {
#if defined(LOWBESSEL_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::besq_euler_step(s, drift, dw, dt, variant);
#endif
    scalar::besq_euler_step(s, drift, dw, dt, variant);
}

void sqrt_elementwise(std::span<const double> in, std::span<double> out) {
#if defined(LOWBESSEL_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::sqrt_elementwise(in, out);
#endif
    scalar::sqrt_elementwise(in, out);
}

double compensated_sum(std::span<const double> x) {
#if defined(LOWBESSEL_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::compensated_sum(x);
#endif
    return scalar::compensated_sum(x);
}

CompensatedMoments compensated_moments(std::span<const double> x) {
#if defined(LOWBESSEL_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::compensated_moments(x);
#endif
    return scalar::compensated_moments(x);
}

}  // namespace kernels
}  // namespace lowbessel
