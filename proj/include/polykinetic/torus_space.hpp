#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "polykinetic/aligned.hpp"

namespace polykinetic {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx, AlignedAllocator<cplx>>;

enum class DomainKind { PeriodicTorus, NoSlipBox };

struct DomainSpec {
    DomainKind kind = DomainKind::PeriodicTorus;
    int dim = 2;
    double side = 1.0;
};

// Periodic box [0, side]^d sampled on an n^d grid. Batched fields are stored interleaved:
// value j of point x lives at grid[x * m + j]; spectra likewise at spec[kidx * m + j].
class TorusSpace {
public:
    TorusSpace(int dim, int n, double side = 1.0);
    ~TorusSpace();
    TorusSpace(const TorusSpace&) = delete;
    TorusSpace& operator=(const TorusSpace&) = delete;

    int dim() const { return dim_; }
    int n() const { return n_; }
    int kmax() const { return kmax_; }
    double side() const { return side_; }
    double volume() const;
    std::size_t size() const { return nx_; }
    std::size_t spectral_size() const { return nk_; }

    std::array<double, 3> coordinate(std::size_t x) const;
    const std::array<int, 3>& wavevector(std::size_t kidx) const { return k_[kidx]; }
    double wavenumber(std::size_t kidx, int axis) const;  // 2 pi k_axis / side
    double k2(std::size_t kidx) const { return k2_[kidx]; }
    double multiplicity(std::size_t kidx) const { return mult_[kidx]; }
    bool kept(std::size_t kidx) const { return kept_[kidx] != 0; }

    // Forward transform normalized so that spec[0] is the mean.
    void forward(const double* grid, cplx* spec, int m) const;
    void inverse(const cplx* spec, double* grid, int m) const;

    void dealias_spectrum(cplx* spec, int m) const;
    void dealias(double* grid, int m) const;

    // Leray projection of a dim-component field (m = dim), also removing the mean.
    void leray_spectrum(cplx* spec) const;
    void leray(double* grid) const;

    // out[x, j*dim + a] = d f_j / d x_a for an m-component band-limited field.
    void gradient(const double* grid, double* out, int m) const;

    double integral(const double* grid, int m, int component) const;
    double l2_norm_sq(const double* grid, int m) const;  // sum over components
    double h1_seminorm_sq(const double* grid, int m) const;
    double h1_dual_norm_sq(const double* grid) const;  // |P f|^2_{V'} for a dim-component field
    double divergence_norm(const double* grid) const;  // l2 norm of the divergence spectrum
    double max_unresolved(const double* grid, int m) const;  // largest spectral amplitude outside the band

private:
    struct Plans;
    const Plans& plans(int m) const;

    int dim_;
    int n_;
    int kmax_;
    double side_;
    std::size_t nx_;
    std::size_t nk_;
    std::vector<std::array<int, 3>> k_;
    std::vector<double> k2_;
    std::vector<double> mult_;
    std::vector<unsigned char> kept_;
    mutable std::mutex mutex_;
    mutable std::map<int, std::unique_ptr<Plans>> plans_;
};

} // namespace polykinetic
