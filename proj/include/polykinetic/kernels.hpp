#pragma once

#include <cstddef>
#include <span>

namespace polykinetic::kernels {

enum class Isa { Scalar, Avx2 };

// Row-major dense kernels. gemm: C[m x n] (+)= A[m x k] * B[k x n] with leading dimensions.
struct Table {
    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scal)(double alpha, double* x, std::size_t n);
    void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, double* C, std::size_t ldc, bool accumulate);
    // y[r, :n] += s[r * s_stride] * x[r, :n]
    void (*row_scaled_add)(std::size_t rows, std::size_t n, const double* s, std::size_t s_stride,
                           const double* x, std::size_t ldx, double* y, std::size_t ldy);
};

const Table& scalar_table();
const Table* avx2_table();  // nullptr when the variant is not compiled in

bool isa_available(Isa isa);
Isa active_isa();
// Selects the variant for subsequent calls; falls back to scalar when unavailable.
void set_isa(Isa isa);
const char* isa_name(Isa isa);

// Worker threads used by the row-parallel wrappers (POLYKINETIC_THREADS caps the default).
int thread_count();
void set_thread_count(int n);

double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* A, std::size_t lda,
          const double* B, std::size_t ldb, double* C, std::size_t ldc, bool accumulate);
void row_scaled_add(std::size_t rows, std::size_t n, const double* s, std::size_t s_stride,
                    const double* x, std::size_t ldx, double* y, std::size_t ldy);

} // namespace polykinetic::kernels
