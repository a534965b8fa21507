#include "polykinetic/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include <omp.h>

namespace polykinetic::kernels {

#ifndef POLYKINETIC_HAVE_AVX2
const Table* avx2_table()
{
    return nullptr;
}
#endif

namespace {

bool cpu_has_avx2()
{
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa()
{
    const char* env = std::getenv("POLYKINETIC_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

int initial_threads()
{
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("POLYKINETIC_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(n, 1);
}

std::atomic<Isa>& current_isa()
{
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

std::atomic<int>& current_threads()
{
    static std::atomic<int> n{initial_threads()};
    return n;
}

const Table& table()
{
    return current_isa().load(std::memory_order_relaxed) == Isa::Avx2 ? *avx2_table() : scalar_table();
}

} // namespace

bool isa_available(Isa isa)
{
    if (isa == Isa::Scalar) return true;
    return avx2_table() != nullptr && cpu_has_avx2();
}

Isa active_isa()
{
    return current_isa().load();
}

void set_isa(Isa isa)
{
    current_isa().store(isa_available(isa) ? isa : Isa::Scalar);
}

const char* isa_name(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

int thread_count()
{
    return current_threads().load();
}

void set_thread_count(int n)
{
    current_threads().store(std::max(1, n));
}

double dot(std::span<const double> x, std::span<const double> y)
{
    return table().dot(x.data(), y.data(), std::min(x.size(), y.size()));
}

double nrm2(std::span<const double> x)
{
    return std::sqrt(table().dot(x.data(), x.data(), x.size()));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    table().axpy(alpha, x.data(), y.data(), std::min(x.size(), y.size()));
}

void scal(double alpha, std::span<double> x)
{
    table().scal(alpha, x.data(), x.size());
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* A, std::size_t lda,
          const double* B, std::size_t ldb, double* C, std::size_t ldc, bool accumulate)
{
    const Table& t = table();
    const int threads = thread_count();
    if (threads <= 1 || m < 64) {
        t.gemm(m, n, k, A, lda, B, ldb, C, ldc, accumulate);
        return;
    }
    // Row blocks are independent, so the result does not depend on the thread count.
    const std::size_t block = ((m + threads - 1) / threads + 3) / 4 * 4;
#pragma omp parallel for num_threads(threads) schedule(static)
    for (long b = 0; b < static_cast<long>((m + block - 1) / block); ++b) {
        const std::size_t r0 = b * block;
        const std::size_t rows = std::min(block, m - r0);
        t.gemm(rows, n, k, A + r0 * lda, lda, B, ldb, C + r0 * ldc, ldc, accumulate);
    }
}

void row_scaled_add(std::size_t rows, std::size_t n, const double* s, std::size_t s_stride,
                    const double* x, std::size_t ldx, double* y, std::size_t ldy)
{
    table().row_scaled_add(rows, n, s, s_stride, x, ldx, y, ldy);
}

} // namespace polykinetic::kernels
