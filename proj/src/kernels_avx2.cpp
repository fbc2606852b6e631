#include "tabmeas/kernels.hpp"

// ---------------------------------------------------------------------------
// AVX2 + FMA backend
//
// This file is the only translation unit compiled with -mavx2 -mfma, so no
// AVX2 instruction can leak into code that runs before the CPU check in
// kernels.cpp. When the toolchain cannot target AVX2 the table collapses to
// nullptr and dispatch stays on the scalar backend.
// ---------------------------------------------------------------------------

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace tabmeas::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double sum_(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

double dot_(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

double weighted_dot_(const double* w, const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), xy, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += w[i] * x[i] * y[i];
    return total;
}

void smooth_(const double* x, double add, double denom, double* out, std::size_t n) {
    // One add and one divide per element, exactly like the scalar backend,
    // so results are bit-identical across backends.
    const __m256d vadd = _mm256_set1_pd(add);
    const __m256d vden = _mm256_set1_pd(denom);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_add_pd(_mm256_loadu_pd(x + i), vadd);
        _mm256_storeu_pd(out + i, _mm256_div_pd(v, vden));
    }
    for (; i < n; ++i) out[i] = (x[i] + add) / denom;
}

double sum_sq_over_(const double* p, const double* q, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vp = _mm256_loadu_pd(p + i);
        __m256d vq = _mm256_loadu_pd(q + i);
        // Lanes with q <= 0 divide by zero harmlessly; the blend discards them.
        __m256d term = _mm256_div_pd(_mm256_mul_pd(vp, vp), vq);
        __m256d mask = _mm256_cmp_pd(vq, zero, _CMP_GT_OQ);
        acc = _mm256_add_pd(acc, _mm256_blendv_pd(zero, term, mask));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        if (q[i] > 0.0) total += p[i] * p[i] / q[i];
    }
    return total;
}

double row_dot(const double* row, const double* x, std::size_t k) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= k; j += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(x + j), acc);
    double total = hsum(acc);
    for (; j < k; ++j) total += row[j] * x[j];
    return total;
}

void matvec_(const double* h, const double* x, double* out, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) out[i] = row_dot(h + i * k, x, k);
}

double quad_form_(const double* h, const double* x, std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += x[i] * row_dot(h + i * k, x, k);
    return acc;
}

double diag_weighted_(const double* h, const double* w, std::size_t k) {
    // Stride-(k+1) access gains nothing from gathers at these sizes; the
    // scalar loop is the fastest correct choice on this backend too.
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += h[i * k + i] * w[i];
    return acc;
}

double max_abs_diff_(const double* x, const double* y, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        best = _mm256_max_pd(best, _mm256_andnot_pd(signmask, d));
    }
    __m128d lo = _mm256_castpd256_pd128(best);
    __m128d hi = _mm256_extractf128_pd(best, 1);
    lo = _mm_max_pd(lo, hi);
    double total = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) total = std::max(total, std::fabs(x[i] - y[i]));
    return total;
}

} // namespace

const ops* avx2_table() {
    static const ops table = {
        sum_,     dot_,       weighted_dot_, smooth_,        sum_sq_over_,
        matvec_,  quad_form_, diag_weighted_, max_abs_diff_,
    };
    return &table;
}

} // namespace tabmeas::kernels

#else // toolchain without AVX2/FMA support

namespace tabmeas::kernels {

const ops* avx2_table() { return nullptr; }

} // namespace tabmeas::kernels

#endif
