// AVX2 kernel variants.  This translation unit is the only one compiled with
// -mavx2; it must stay behind the runtime dispatch in kernels_dispatch.cpp.
// No FMA: multiplies and adds are kept separate so axpy rounds exactly like
// the scalar reference.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "activeft/kernels.hpp"

namespace activeft::kernels {

namespace {

// Folds a 4-lane accumulator lane by lane, lowest lane first.
inline double fold_lanes(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

double dot_ff_avx2(const float* a, const float* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a0 = _mm256_cvtps_pd(_mm_loadu_ps(a + i));
        const __m256d a1 = _mm256_cvtps_pd(_mm_loadu_ps(a + i + 4));
        const __m256d b0 = _mm256_cvtps_pd(_mm_loadu_ps(b + i));
        const __m256d b1 = _mm256_cvtps_pd(_mm_loadu_ps(b + i + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a0, b0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(a1, b1));
    }
    double acc = fold_lanes(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += double(a[i]) * double(b[i]);
    return acc;
}

double dot_fd_avx2(const float* a, const double* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a0 = _mm256_cvtps_pd(_mm_loadu_ps(a + i));
        const __m256d a1 = _mm256_cvtps_pd(_mm_loadu_ps(a + i + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a0, _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(a1, _mm256_loadu_pd(b + i + 4)));
    }
    double acc = fold_lanes(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += double(a[i]) * b[i];
    return acc;
}

double dot_dd_avx2(const double* a, const double* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(
            acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    double acc = fold_lanes(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_f_avx2(double alpha, const float* x, double* y, size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) y[i] += alpha * double(x[i]);
}

void axpy_d_avx2(double alpha, const double* x, double* y, size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Ops* avx2_ops() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Ops table{dot_ff_avx2, dot_fd_avx2, dot_dd_avx2,
                           axpy_f_avx2, axpy_d_avx2, "avx2"};
    return &table;
}

}  // namespace activeft::kernels

#endif  // x86_64
