// Compiled with -mavx2 -mfma; only reached after a cpuid check.
#include <immintrin.h>

#include "polykinetic/kernels.hpp"

namespace polykinetic::kernels {

namespace {

double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n)
{
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
        a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
        a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double acc = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n)
{
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(y + i + 4, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_avx2(double alpha, double* x, std::size_t n)
{
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(a, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

// 4 x 8 register block: 8 accumulators, two B loads and four broadcasts per k.
inline void block_4x8(std::size_t k, const double* A, std::size_t lda, const double* B, std::size_t ldb,
                      double* C, std::size_t ldc, bool accumulate)
{
    __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
    __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
    __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
    __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
    if (accumulate) {
        c00 = _mm256_loadu_pd(C);
        c01 = _mm256_loadu_pd(C + 4);
        c10 = _mm256_loadu_pd(C + ldc);
        c11 = _mm256_loadu_pd(C + ldc + 4);
        c20 = _mm256_loadu_pd(C + 2 * ldc);
        c21 = _mm256_loadu_pd(C + 2 * ldc + 4);
        c30 = _mm256_loadu_pd(C + 3 * ldc);
        c31 = _mm256_loadu_pd(C + 3 * ldc + 4);
    }
    for (std::size_t p = 0; p < k; ++p) {
        const __m256d b0 = _mm256_loadu_pd(B + p * ldb);
        const __m256d b1 = _mm256_loadu_pd(B + p * ldb + 4);
        __m256d a = _mm256_broadcast_sd(A + p);
        c00 = _mm256_fmadd_pd(a, b0, c00);
        c01 = _mm256_fmadd_pd(a, b1, c01);
        a = _mm256_broadcast_sd(A + lda + p);
        c10 = _mm256_fmadd_pd(a, b0, c10);
        c11 = _mm256_fmadd_pd(a, b1, c11);
        a = _mm256_broadcast_sd(A + 2 * lda + p);
        c20 = _mm256_fmadd_pd(a, b0, c20);
        c21 = _mm256_fmadd_pd(a, b1, c21);
        a = _mm256_broadcast_sd(A + 3 * lda + p);
        c30 = _mm256_fmadd_pd(a, b0, c30);
        c31 = _mm256_fmadd_pd(a, b1, c31);
    }
    _mm256_storeu_pd(C, c00);
    _mm256_storeu_pd(C + 4, c01);
    _mm256_storeu_pd(C + ldc, c10);
    _mm256_storeu_pd(C + ldc + 4, c11);
    _mm256_storeu_pd(C + 2 * ldc, c20);
    _mm256_storeu_pd(C + 2 * ldc + 4, c21);
    _mm256_storeu_pd(C + 3 * ldc, c30);
    _mm256_storeu_pd(C + 3 * ldc + 4, c31);
}

inline void block_1x4(std::size_t k, const double* A, const double* B, std::size_t ldb, double* C, bool accumulate)
{
    __m256d c = accumulate ? _mm256_loadu_pd(C) : _mm256_setzero_pd();
    for (std::size_t p = 0; p < k; ++p) c = _mm256_fmadd_pd(_mm256_broadcast_sd(A + p), _mm256_loadu_pd(B + p * ldb), c);
    _mm256_storeu_pd(C, c);
}

inline void block_1x1(std::size_t k, const double* A, const double* B, std::size_t ldb, double* C, bool accumulate)
{
    double c = accumulate ? *C : 0.0;
    for (std::size_t p = 0; p < k; ++p) c = __builtin_fma(A[p], B[p * ldb], c);
    *C = c;
}

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const double* A, std::size_t lda,
               const double* B, std::size_t ldb, double* C, std::size_t ldc, bool accumulate)
{
    const std::size_t n8 = n - n % 8;
    const std::size_t n4 = n - n % 4;
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        const double* a = A + i * lda;
        double* c = C + i * ldc;
        for (std::size_t j = 0; j < n8; j += 8) block_4x8(k, a, lda, B + j, ldb, c + j, ldc, accumulate);
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t j = n8; j < n4; j += 4) block_1x4(k, a + r * lda, B + j, ldb, c + r * ldc + j, accumulate);
            for (std::size_t j = n4; j < n; ++j) block_1x1(k, a + r * lda, B + j, ldb, c + r * ldc + j, accumulate);
        }
    }
    for (; i < m; ++i) {
        const double* a = A + i * lda;
        double* c = C + i * ldc;
        for (std::size_t j = 0; j < n4; j += 4) block_1x4(k, a, B + j, ldb, c + j, accumulate);
        for (std::size_t j = n4; j < n; ++j) block_1x1(k, a, B + j, ldb, c + j, accumulate);
    }
}

void row_scaled_add_avx2(std::size_t rows, std::size_t n, const double* s, std::size_t s_stride,
                         const double* x, std::size_t ldx, double* y, std::size_t ldy)
{
    for (std::size_t r = 0; r < rows; ++r) axpy_avx2(s[r * s_stride], x + r * ldx, y + r * ldy, n);
}

const Table kAvx2{dot_avx2, axpy_avx2, scal_avx2, gemm_avx2, row_scaled_add_avx2};

} // namespace

const Table* avx2_table()
{
    return &kAvx2;
}

} // namespace polykinetic::kernels
