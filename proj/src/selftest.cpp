#include "polykinetic/selftest.hpp"

#include <cmath>
#include <random>

#include "polykinetic/config.hpp"
#include "polykinetic/entropy.hpp"
#include "polykinetic/fp_solver.hpp"
#include "polykinetic/kernels.hpp"
#include "polykinetic/ns_solver.hpp"

namespace polykinetic {

namespace {

PhysicalParams default_params(int K)
{
    PhysicalParams p;
    p.K = K;
    return p;
}

RealVector random_field(const TorusSpace& xs, int m, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    RealVector f(xs.size() * m);
    for (auto& v : f) v = g(rng);
    xs.dealias(f.data(), m);
    return f;
}

} // namespace

double ibp_worst_residual(int q_degree, int K, int trials, unsigned seed)
{
    const PhysicalParams p = default_params(K);
    const auto disc = build_spaces(p, make_chain(K, PotentialSpec{}), Resolution{4, q_degree, 0, 0});
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const int d = disc->dim();
    double worst = 0.0;
    std::vector<double> phi(disc->nq());
    for (int t = 0; t < trials; ++t) {
        Eigen::MatrixXd B(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) B(i, j) = g(rng);
        B -= (B.trace() / d) * Eigen::MatrixXd::Identity(d, d);
        for (std::size_t l = 0; l < disc->nq(); ++l) {
            std::fill(phi.begin(), phi.end(), 0.0);
            phi[l] = 1.0;
            worst = std::max(worst, disc->ibp_residual(B, phi.data()));
        }
    }
    return worst;
}

std::vector<SelfCheck> run_selftest(unsigned seed)
{
    std::vector<SelfCheck> out;
    auto check = [&](const std::string& name, double value, double tol) {
        out.push_back({name, std::isfinite(value) && value <= tol, value, tol});
    };
    std::mt19937_64 rng(seed);

    check("ibp residual, 20 random trace-free B, every basis function", ibp_worst_residual(8, 1, 20, seed), 1e-10);

    const PhysicalParams p = default_params(1);
    const auto disc = build_spaces(p, make_chain(1, PotentialSpec{}), Resolution{16, 6, 0, 0});
    const TorusSpace& xs = disc->x();
    const int d = xs.dim();

    check("basis gram matrix is the identity", disc->q().gram_error(), 1e-12);

    {
        const ConfigurationDensity one = disc->constant_density(1.0);
        const VelocityField zero = disc->zero_velocity();
        const ConfigurationDensity next = fp_step(*disc, p, one, zero, zero, 0.05, 10.0);
        double dev = 0.0;
        for (std::size_t i = 0; i < next.coeffs.size(); ++i) dev = std::max(dev, std::abs(next.coeffs[i] - one.coeffs[i]));
        check("equilibrium is a fixed point of the Fokker-Planck step", dev, 1e-12);
    }

    {
        RealVector u = random_field(xs, d, rng);
        xs.leray(u.data());
        RealVector u2(u);
        xs.leray(u2.data());
        double dev = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) dev = std::max(dev, std::abs(u2[i] - u[i]));
        check("Leray projection is idempotent", dev, 1e-13);
        check("projected field is divergence-free", xs.divergence_norm(u.data()), 1e-13);
    }

    {
        RealVector v = random_field(xs, d, rng), w1 = random_field(xs, d, rng), w2 = random_field(xs, d, rng);
        xs.leray(v.data());
        RealVector g1(xs.size() * d * d), g2(xs.size() * d * d);
        xs.gradient(w1.data(), g1.data(), d);
        xs.gradient(w2.data(), g2.data(), d);
        double a = 0.0, b = 0.0, scale = 0.0;
        for (std::size_t x = 0; x < xs.size(); ++x)
            for (int j = 0; j < d; ++j) {
                double c1 = 0.0, c2 = 0.0;
                for (int k = 0; k < d; ++k) {
                    c1 += v[x * d + k] * g1[(x * d + j) * d + k];
                    c2 += v[x * d + k] * g2[(x * d + j) * d + k];
                }
                a += c1 * w2[x * d + j];
                b += c2 * w1[x * d + j];
                scale += std::abs(c1 * w2[x * d + j]);
            }
        check("convection skew-symmetry (relative)", std::abs(a + b) / scale, 1e-11);
    }

    {
        VelocityField u{random_field(xs, d, rng)};
        for (auto& v : u.values) v *= 0.1;
        xs.leray(u.values.data());
        ConfigurationDensity psi = disc->constant_density(1.0);
        std::normal_distribution<double> g;
        for (std::size_t x = 0; x < disc->nx(); ++x)
            for (std::size_t l = 1; l < 4; ++l) psi.coeffs[x * disc->nq() + l] = 0.05 * g(rng);
        xs.dealias(psi.coeffs.data(), static_cast<int>(disc->nq()));
        for (std::size_t x = 0; x < disc->nx(); ++x) psi.coeffs[x * disc->nq()] = 1.0 + 0.1 * std::cos(6.283185307179586 * xs.coordinate(x)[0]);
        const double dt = 0.05;
        const ConfigurationDensity next = fp_step(*disc, p, psi, u, u, dt, 1e6);
        const MarginalDensity z1 = marginal(*disc, next);
        const MarginalDensity z2 = marginal_step(*disc, p.epsilon, marginal(*disc, psi), u, dt);
        double dev = 0.0;
        for (std::size_t x = 0; x < z1.values.size(); ++x) dev = std::max(dev, std::abs(z1.values[x] - z2.values[x]));
        check("marginal of a Fokker-Planck step equals the marginal equation", dev, 1e-10);
    }

    {
        double worst = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double s = 0.05 * i;
            worst = std::max(worst, entropy_F(s) - entropy_family(s, 2.0, 0));
        }
        check("F^L >= F on samples", worst, 0.0);
    }

    {
        const RouseResult r = rouse_matrix(3);
        check("Rouse a0 for K=3 equals 2 - sqrt 2", std::abs(r.a0 - (2.0 - std::sqrt(2.0))), 1e-12);
    }

    {
        const auto* avx = kernels::avx2_table();
        if (avx && kernels::isa_available(kernels::Isa::Avx2)) {
            const auto& sc = kernels::scalar_table();
            std::normal_distribution<double> g;
            const std::size_t m = 37, n = 29, k = 23;
            std::vector<double> A(m * k), B(k * n), C1(m * n), C2(m * n);
            for (auto& v : A) v = g(rng);
            for (auto& v : B) v = g(rng);
            sc.gemm(m, n, k, A.data(), k, B.data(), n, C1.data(), n, false);
            avx->gemm(m, n, k, A.data(), k, B.data(), n, C2.data(), n, false);
            double dev = 0.0;
            for (std::size_t i = 0; i < C1.size(); ++i) dev = std::max(dev, std::abs(C1[i] - C2[i]));
            const double d1 = sc.dot(A.data(), A.data(), A.size()), d2 = avx->dot(A.data(), A.data(), A.size());
            dev = std::max(dev, std::abs(d1 - d2) / d1);
            check("AVX2 kernels agree with the scalar reference", dev, 1e-12);
        }
    }
    return out;
}

} // namespace polykinetic
