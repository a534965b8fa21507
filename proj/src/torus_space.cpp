#include "polykinetic/torus_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include <fftw3.h>

#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;  // the FFTW planner is not thread-safe
    return m;
}

} // namespace

struct TorusSpace::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    ~Plans()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

TorusSpace::TorusSpace(int dim, int n, double side) : dim_(dim), n_(n), side_(side)
{
    if (dim != 2 && dim != 3) fail(ErrorKind::InvalidParameter, "TorusSpace: dim must be 2 or 3");
    if (n < 4 || n % 2 != 0) fail(ErrorKind::Resolution, "TorusSpace: grid size must be even and >= 4");
    if (!(side > 0.0)) fail(ErrorKind::InvalidParameter, "TorusSpace: side must be > 0");
    kmax_ = (n - 1) / 3;
    nx_ = 1;
    for (int a = 0; a < dim; ++a) nx_ *= n;
    const int nh = n / 2 + 1;
    nk_ = nx_ / n * nh;
    k_.resize(nk_);
    k2_.resize(nk_);
    mult_.resize(nk_);
    kept_.resize(nk_);
    for (std::size_t idx = 0; idx < nk_; ++idx) {
        std::size_t rem = idx;
        std::array<int, 3> k{0, 0, 0};
        const int last = rem % nh;
        rem /= nh;
        k[dim - 1] = last;
        for (int a = dim - 2; a >= 0; --a) {
            const int j = rem % n;
            rem /= n;
            k[a] = j <= n / 2 ? j : j - n;
        }
        k_[idx] = k;
        double s = 0.0;
        bool keep = true;
        for (int a = 0; a < dim; ++a) {
            const double w = 2.0 * std::numbers::pi * k[a] / side;
            s += w * w;
            if (std::abs(k[a]) > kmax_) keep = false;
        }
        k2_[idx] = s;
        kept_[idx] = keep ? 1 : 0;
        mult_[idx] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    }
}

TorusSpace::~TorusSpace() = default;

double TorusSpace::volume() const
{
    return std::pow(side_, dim_);
}

std::array<double, 3> TorusSpace::coordinate(std::size_t x) const
{
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (int a = dim_ - 1; a >= 0; --a) {
        c[a] = side_ * static_cast<double>(x % n_) / n_;
        x /= n_;
    }
    return c;
}

double TorusSpace::wavenumber(std::size_t kidx, int axis) const
{
    return 2.0 * std::numbers::pi * k_[kidx][axis] / side_;
}

const TorusSpace::Plans& TorusSpace::plans(int m) const
{
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(m);
    if (it != plans_.end()) return *it->second;
    auto p = std::make_unique<Plans>();
    int dims[3] = {n_, n_, n_};
    double* in = fftw_alloc_real(nx_ * m);
    fftw_complex* out = fftw_alloc_complex(nk_ * m);
    {
        std::lock_guard<std::mutex> plock(planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p->r2c = fftw_plan_many_dft_r2c(dim_, dims, m, in, nullptr, m, 1, out, nullptr, m, 1, flags);
        p->c2r = fftw_plan_many_dft_c2r(dim_, dims, m, out, nullptr, m, 1, in, nullptr, m, 1, flags);
    }
    fftw_free(in);
    fftw_free(out);
    if (!p->r2c || !p->c2r) fail(ErrorKind::Resolution, "TorusSpace: FFTW planning failed");
    auto& ref = *p;
    plans_.emplace(m, std::move(p));
    return ref;
}

void TorusSpace::forward(const double* grid, cplx* spec, int m) const
{
    const auto& p = plans(m);
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(grid), reinterpret_cast<fftw_complex*>(spec));
    const double scale = 1.0 / static_cast<double>(nx_);
    const std::size_t total = nk_ * m;
    for (std::size_t i = 0; i < total; ++i) spec[i] *= scale;
}

void TorusSpace::inverse(const cplx* spec, double* grid, int m) const
{
    const auto& p = plans(m);
    ComplexVector scratch(spec, spec + nk_ * m);
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), grid);
}

void TorusSpace::dealias_spectrum(cplx* spec, int m) const
{
    for (std::size_t idx = 0; idx < nk_; ++idx)
        if (!kept_[idx])
            for (int j = 0; j < m; ++j) spec[idx * m + j] = 0.0;
}

void TorusSpace::dealias(double* grid, int m) const
{
    ComplexVector spec(nk_ * m);
    forward(grid, spec.data(), m);
    dealias_spectrum(spec.data(), m);
    inverse(spec.data(), grid, m);
}

void TorusSpace::leray_spectrum(cplx* spec) const
{
    const int d = dim_;
    for (std::size_t idx = 0; idx < nk_; ++idx) {
        cplx* u = spec + idx * d;
        if (k2_[idx] == 0.0 || !kept_[idx]) {
            for (int a = 0; a < d; ++a) u[a] = 0.0;
            continue;
        }
        cplx kd = 0.0;
        double kk = 0.0;
        for (int a = 0; a < d; ++a) {
            kd += static_cast<double>(k_[idx][a]) * u[a];
            kk += static_cast<double>(k_[idx][a]) * k_[idx][a];
        }
        for (int a = 0; a < d; ++a) u[a] -= (static_cast<double>(k_[idx][a]) / kk) * kd;
    }
}

void TorusSpace::leray(double* grid) const
{
    ComplexVector spec(nk_ * dim_);
    forward(grid, spec.data(), dim_);
    leray_spectrum(spec.data());
    inverse(spec.data(), grid, dim_);
}

void TorusSpace::gradient(const double* grid, double* out, int m) const
{
    ComplexVector spec(nk_ * m), g(nk_ * m * dim_);
    forward(grid, spec.data(), m);
    for (std::size_t idx = 0; idx < nk_; ++idx) {
        bool nyquist = false;
        for (int a = 0; a < dim_; ++a) nyquist = nyquist || std::abs(k_[idx][a]) == n_ / 2;
        for (int j = 0; j < m; ++j)
            for (int a = 0; a < dim_; ++a)
                g[(idx * m + j) * dim_ + a] = nyquist ? cplx(0.0) : cplx(0.0, wavenumber(idx, a)) * spec[idx * m + j];
    }
    inverse(g.data(), out, m * dim_);
}

double TorusSpace::integral(const double* grid, int m, int component) const
{
    double acc = 0.0;
    for (std::size_t x = 0; x < nx_; ++x) acc += grid[x * m + component];
    return acc * volume() / static_cast<double>(nx_);
}

double TorusSpace::l2_norm_sq(const double* grid, int m) const
{
    double acc = 0.0;
    const std::size_t total = nx_ * m;
    for (std::size_t i = 0; i < total; ++i) acc += grid[i] * grid[i];
    return acc * volume() / static_cast<double>(nx_);
}

double TorusSpace::h1_seminorm_sq(const double* grid, int m) const
{
    ComplexVector spec(nk_ * m);
    forward(grid, spec.data(), m);
    double acc = 0.0;
    for (std::size_t idx = 0; idx < nk_; ++idx) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += std::norm(spec[idx * m + j]);
        acc += mult_[idx] * k2_[idx] * s;
    }
    return acc * volume();
}

double TorusSpace::h1_dual_norm_sq(const double* grid) const
{
    ComplexVector spec(nk_ * dim_);
    forward(grid, spec.data(), dim_);
    leray_spectrum(spec.data());
    double acc = 0.0;
    for (std::size_t idx = 0; idx < nk_; ++idx) {
        if (k2_[idx] == 0.0) continue;
        double s = 0.0;
        for (int a = 0; a < dim_; ++a) s += std::norm(spec[idx * dim_ + a]);
        acc += mult_[idx] * s / k2_[idx];
    }
    return acc * volume();
}

double TorusSpace::divergence_norm(const double* grid) const
{
    ComplexVector spec(nk_ * dim_);
    forward(grid, spec.data(), dim_);
    double acc = 0.0;
    for (std::size_t idx = 0; idx < nk_; ++idx) {
        cplx div = 0.0;
        for (int a = 0; a < dim_; ++a) div += cplx(0.0, wavenumber(idx, a)) * spec[idx * dim_ + a];
        acc += mult_[idx] * std::norm(div);
    }
    return std::sqrt(acc);
}

double TorusSpace::max_unresolved(const double* grid, int m) const
{
    ComplexVector spec(nk_ * m);
    forward(grid, spec.data(), m);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < nk_; ++idx)
        if (!kept_[idx])
            for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(spec[idx * m + j]));
    return worst;
}

} // namespace polykinetic
