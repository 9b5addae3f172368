// Compiled with -mavx2 (and without FMA) only on x86-64 builds.

#include "lowbessel/kernels.hpp"

#include <immintrin.h>

#include <array>
#include <cmath>
#include <stdexcept>

namespace lowbessel::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Lane-wise Neumaier update.
inline void neumaier_add(__m256d& sum, __m256d& comp, __m256d x) {
    const __m256d t = _mm256_add_pd(sum, x);
    const __m256d big_sum = _mm256_cmp_pd(abs_pd(sum), abs_pd(x), _CMP_GE_OQ);
    const __m256d a = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
    const __m256d b = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(b, a, big_sum));
    sum = t;
}

inline void neumaier_add(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
    else
        comp += (x - t) + sum;
    sum = t;
}

double reduce(__m256d sum, __m256d comp, double tail_sum, double tail_comp) {
    alignas(32) std::array<double, 4> s{};
    alignas(32) std::array<double, 4> c{};
    _mm256_store_pd(s.data(), sum);
    _mm256_store_pd(c.data(), comp);
    double total = 0.0;
    double total_comp = 0.0;
    for (int k = 0; k < 4; ++k) {
        neumaier_add(total, total_comp, s[k]);
        neumaier_add(total, total_comp, c[k]);
    }
    neumaier_add(total, total_comp, tail_sum);
    neumaier_add(total, total_comp, tail_comp);
    return total + total_comp;
}

}  // namespace

void besq_euler_step(std::span<double> s, std::span<const double> drift,
                     std::span<const double> dw, double dt, SchemeVariant variant) {
    if (drift.size() != s.size() || dw.size() != s.size())
        throw std::invalid_argument("besq_euler_step: size mismatch");
    const std::size_t n = s.size();
    const std::size_t vec_end = n - n % 4;
    const __m256d zero = _mm256_setzero_pd();
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d vdt = _mm256_set1_pd(dt);

    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d si = _mm256_loadu_pd(s.data() + i);
        const __m256d di = _mm256_loadu_pd(drift.data() + i);
        const __m256d wi = _mm256_loadu_pd(dw.data() + i);
        const __m256d root = _mm256_sqrt_pd(_mm256_max_pd(si, zero));
        __m256d out;
        if (variant == SchemeVariant::drift_implicit) {
            const __m256d a = _mm256_add_pd(root, wi);
            const __m256d lin = _mm256_mul_pd(_mm256_mul_pd(two, _mm256_sub_pd(di, one)), vdt);
            const __m256d disc = _mm256_add_pd(_mm256_mul_pd(a, a), lin);
            const __m256d y1 =
                _mm256_mul_pd(half, _mm256_add_pd(a, _mm256_sqrt_pd(_mm256_max_pd(disc, zero))));
            out = _mm256_mul_pd(y1, y1);
        } else {
            const __m256d next = _mm256_add_pd(_mm256_add_pd(si, _mm256_mul_pd(di, vdt)),
                                               _mm256_mul_pd(_mm256_mul_pd(two, root), wi));
            out = variant == SchemeVariant::euler_full_truncation ? _mm256_max_pd(next, zero)
                                                                  : abs_pd(next);
        }
        _mm256_storeu_pd(s.data() + i, out);
    }
    if (vec_end < n)
        scalar::besq_euler_step(s.subspan(vec_end), drift.subspan(vec_end), dw.subspan(vec_end),
                                dt, variant);
}

void sqrt_elementwise(std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size()) throw std::invalid_argument("sqrt_elementwise: size mismatch");
    const std::size_t n = in.size();
    const std::size_t vec_end = n - n % 4;
    for (std::size_t i = 0; i < vec_end; i += 4)
        _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(_mm256_loadu_pd(in.data() + i)));
    for (std::size_t i = vec_end; i < n; ++i) out[i] = std::sqrt(in[i]);
}

double compensated_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t vec_end = n - n % 4;
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    for (std::size_t i = 0; i < vec_end; i += 4)
        neumaier_add(sum, comp, _mm256_loadu_pd(x.data() + i));
    double ts = 0.0, tc = 0.0;
    for (std::size_t i = vec_end; i < n; ++i) neumaier_add(ts, tc, x[i]);
    return reduce(sum, comp, ts, tc);
}

CompensatedMoments compensated_moments(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t vec_end = n - n % 4;
    __m256d s1 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd(), c2 = _mm256_setzero_pd();
    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d v = _mm256_loadu_pd(x.data() + i);
        neumaier_add(s1, c1, v);
        neumaier_add(s2, c2, _mm256_mul_pd(v, v));
    }
    double ts1 = 0.0, tc1 = 0.0, ts2 = 0.0, tc2 = 0.0;
    for (std::size_t i = vec_end; i < n; ++i) {
        neumaier_add(ts1, tc1, x[i]);
        neumaier_add(ts2, tc2, x[i] * x[i]);
    }
    return {reduce(s1, c1, ts1, tc1), reduce(s2, c2, ts2, tc2)};
}

}  // namespace lowbessel::kernels::avx2
