#include "polykinetic/kernels.hpp"

namespace polykinetic::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void gemm_scalar(std::size_t m, std::size_t n, std::size_t k, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, double* C, std::size_t ldc, bool accumulate)
{
    for (std::size_t i = 0; i < m; ++i) {
        double* c = C + i * ldc;
        if (!accumulate)
            for (std::size_t j = 0; j < n; ++j) c[j] = 0.0;
        const double* a = A + i * lda;
        for (std::size_t p = 0; p < k; ++p) {
            const double ap = a[p];
            const double* b = B + p * ldb;
            for (std::size_t j = 0; j < n; ++j) c[j] += ap * b[j];
        }
    }
}

void row_scaled_add_scalar(std::size_t rows, std::size_t n, const double* s, std::size_t s_stride,
                           const double* x, std::size_t ldx, double* y, std::size_t ldy)
{
    for (std::size_t r = 0; r < rows; ++r) {
        const double a = s[r * s_stride];
        const double* xr = x + r * ldx;
        double* yr = y + r * ldy;
        for (std::size_t j = 0; j < n; ++j) yr[j] += a * xr[j];
    }
}

const Table kScalar{dot_scalar, axpy_scalar, scal_scalar, gemm_scalar, row_scaled_add_scalar};

} // namespace

const Table& scalar_table()
{
    return kScalar;
}

} // namespace polykinetic::kernels
