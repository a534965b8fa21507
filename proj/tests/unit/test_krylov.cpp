#include <doctest.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "polykinetic/krylov.hpp"

using namespace polykinetic;

TEST_SUITE("krylov")
{
    TEST_CASE("GMRES solves a nonsymmetric system; LU is the oracle")
    {
        const int n = 150;
        std::mt19937_64 rng(12);
        std::normal_distribution<double> nd;
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = nd(rng) / std::sqrt(static_cast<double>(n));
        A += 3.0 * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) b(i) = nd(rng);
        const Eigen::VectorXd ref = A.partialPivLu().solve(b);

        auto op = [&](const double* in, double* out) {
            Eigen::Map<Eigen::VectorXd>(out, n) = A * Eigen::Map<const Eigen::VectorXd>(in, n);
        };
        auto jacobi = [&](const double* in, double* out) {
            for (int i = 0; i < n; ++i) out[i] = in[i] / A(i, i);
        };
        for (int restart : {10, 60}) {
            std::vector<double> x(n, 0.0);
            const auto rep = gmres(n, op, jacobi, b.data(), x.data(), KrylovOptions{1e-12, restart, 2000});
            CHECK(rep.converged);
            CHECK(rep.relative_residual <= 1e-12);
            CHECK((Eigen::Map<Eigen::VectorXd>(x.data(), n) - ref).norm() / ref.norm() < 1e-10);
        }
    }

    TEST_CASE("exact guess and zero right-hand side return immediately")
    {
        const int n = 4;
        auto id = [](const double* in, double* out) {
            for (int i = 0; i < n; ++i) out[i] = 2.0 * in[i];
        };
        auto none = [](const double* in, double* out) { std::copy(in, in + n, out); };
        std::vector<double> b{2, 4, 6, 8}, x{1, 2, 3, 4};
        auto rep = gmres(n, id, none, b.data(), x.data());
        CHECK(rep.iterations == 0);
        std::vector<double> z(n, 0.0), xz(n, 0.0);
        rep = gmres(n, id, none, z.data(), xz.data());
        CHECK(rep.converged);
        for (double v : xz) CHECK(v == 0.0);
    }

    TEST_CASE("iteration cap reports non-convergence")
    {
        const int n = 50;
        auto op = [](const double* in, double* out) {
            for (int i = 0; i < n; ++i) out[i] = (1.0 + i) * in[i] + (i ? in[i - 1] : 0.0);
        };
        auto none = [](const double* in, double* out) { std::copy(in, in + n, out); };
        std::vector<double> b(n, 1.0), x(n, 0.0);
        const auto rep = gmres(n, op, none, b.data(), x.data(), KrylovOptions{1e-14, 3, 3});
        CHECK_FALSE(rep.converged);
        CHECK(rep.iterations <= 3);
    }
}
