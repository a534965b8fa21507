#include "polykinetic/krylov.hpp"

#include <cmath>
#include <span>
#include <vector>

#include "polykinetic/aligned.hpp"
#include "polykinetic/kernels.hpp"

namespace polykinetic {

namespace {

std::span<const double> cspan(const RealVector& v) { return {v.data(), v.size()}; }
std::span<double> mspan(RealVector& v) { return {v.data(), v.size()}; }

} // namespace

KrylovReport gmres(std::size_t n, const LinearOperator& A, const LinearOperator& precond, const double* b, double* x,
                   const KrylovOptions& options)
{
    KrylovReport rep;
    const double bnorm = kernels::nrm2({b, n});
    if (bnorm == 0.0) {
        std::fill(x, x + n, 0.0);
        rep.converged = true;
        return rep;
    }
    const int m = options.restart;
    // Krylov vectors are allocated on first use; most solves need only a few.
    std::vector<RealVector> V, Z;
    auto ensure = [&](int j) {
        while (static_cast<int>(V.size()) <= j + 1) V.emplace_back(n);
        while (static_cast<int>(Z.size()) <= j) Z.emplace_back(n);
    };
    std::vector<double> H((m + 1) * m), cs(m), sn(m), g(m + 1), y(m);
    RealVector r(n);

    auto residual = [&]() {
        A(x, r.data());
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        return kernels::nrm2(cspan(r));
    };

    double beta = residual();
    rep.relative_residual = beta / bnorm;
    while (true) {
        if (rep.relative_residual <= options.tol) {
            rep.converged = true;
            return rep;
        }
        if (rep.iterations >= options.max_iter) return rep;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        ensure(0);
        for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
        int j = 0;
        for (; j < m && rep.iterations < options.max_iter; ++j) {
            ++rep.iterations;
            ensure(j);
            precond(V[j].data(), Z[j].data());
            A(Z[j].data(), V[j + 1].data());
            for (int i = 0; i <= j; ++i) {
                const double h = kernels::dot(cspan(V[j + 1]), cspan(V[i]));
                H[i * m + j] = h;
                kernels::axpy(-h, cspan(V[i]), mspan(V[j + 1]));
            }
            const double hn = kernels::nrm2(cspan(V[j + 1]));
            H[(j + 1) * m + j] = hn;
            if (hn > 0.0) kernels::scal(1.0 / hn, mspan(V[j + 1]));
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H[i * m + j] + sn[i] * H[(i + 1) * m + j];
                H[(i + 1) * m + j] = -sn[i] * H[i * m + j] + cs[i] * H[(i + 1) * m + j];
                H[i * m + j] = t;
            }
            const double a = H[j * m + j], c = H[(j + 1) * m + j];
            const double rho = std::hypot(a, c);
            cs[j] = rho > 0.0 ? a / rho : 1.0;
            sn[j] = rho > 0.0 ? c / rho : 0.0;
            H[j * m + j] = rho;
            H[(j + 1) * m + j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            if (std::abs(g[j + 1]) / bnorm <= options.tol || hn == 0.0) {
                ++j;
                break;
            }
        }
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < j; ++k) s -= H[i * m + k] * y[k];
            y[i] = s / H[i * m + i];
        }
        for (int i = 0; i < j; ++i) kernels::axpy(y[i], cspan(Z[i]), {x, n});
        beta = residual();
        rep.relative_residual = beta / bnorm;
    }
}

} // namespace polykinetic
