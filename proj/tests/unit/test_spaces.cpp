#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "polykinetic/errors.hpp"
#include "polykinetic/torus_space.hpp"
#include "support.hpp"

using namespace polykinetic;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_SUITE("torus_space")
{
    TEST_CASE("transform round trip and gradient of a trigonometric field")
    {
        TorusSpace x(2, 16);
        std::vector<double> f(x.size()), back(x.size()), g(x.size() * 2);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto c = x.coordinate(i);
            f[i] = std::sin(2 * kPi * c[0]) * std::cos(4 * kPi * c[1]) + 0.3;
        }
        ComplexVector spec(x.spectral_size());
        x.forward(f.data(), spec.data(), 1);
        CHECK(spec[0].real() == doctest::Approx(0.3).epsilon(1e-14));
        x.inverse(spec.data(), back.data(), 1);
        x.gradient(f.data(), g.data(), 1);
        double err_rt = 0.0, err_g = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto c = x.coordinate(i);
            err_rt = std::max(err_rt, std::abs(back[i] - f[i]));
            const double gx = 2 * kPi * std::cos(2 * kPi * c[0]) * std::cos(4 * kPi * c[1]);
            const double gy = -4 * kPi * std::sin(2 * kPi * c[0]) * std::sin(4 * kPi * c[1]);
            err_g = std::max({err_g, std::abs(g[2 * i] - gx), std::abs(g[2 * i + 1] - gy)});
        }
        CHECK(err_rt < 1e-14);
        CHECK(err_g < 1e-12);
        CHECK(x.integral(f.data(), 1, 0) == doctest::Approx(0.3).epsilon(1e-14));
    }

    TEST_CASE("norms of a shear mode")
    {
        TorusSpace x(2, 16);
        std::vector<double> u(x.size() * 2, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) u[2 * i] = std::sin(2 * kPi * x.coordinate(i)[1]);
        CHECK(x.l2_norm_sq(u.data(), 2) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(x.h1_seminorm_sq(u.data(), 2) == doctest::Approx(0.5 * 4 * kPi * kPi).epsilon(1e-13));
        CHECK(x.h1_dual_norm_sq(u.data()) == doctest::Approx(0.5 / (4 * kPi * kPi)).epsilon(1e-13));
        CHECK(x.divergence_norm(u.data()) < 1e-12);
    }

    TEST_CASE("Leray projection")
    {
        TorusSpace x(2, 16);
        std::vector<double> grad(x.size() * 2), sol(x.size() * 2), rnd(x.size() * 2);
        std::mt19937_64 rng(9);
        std::normal_distribution<double> n;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto c = x.coordinate(i);
            // grad of sin(2 pi x) sin(2 pi y)
            grad[2 * i] = 2 * kPi * std::cos(2 * kPi * c[0]) * std::sin(2 * kPi * c[1]);
            grad[2 * i + 1] = 2 * kPi * std::sin(2 * kPi * c[0]) * std::cos(2 * kPi * c[1]);
            // Taylor-Green: solenoidal, mean zero
            sol[2 * i] = std::sin(2 * kPi * c[0]) * std::cos(2 * kPi * c[1]);
            sol[2 * i + 1] = -std::cos(2 * kPi * c[0]) * std::sin(2 * kPi * c[1]);
            rnd[2 * i] = n(rng);
            rnd[2 * i + 1] = n(rng);
        }
        auto sol0 = sol;
        x.leray(grad.data());
        x.leray(sol.data());
        for (std::size_t i = 0; i < grad.size(); ++i) {
            CHECK(std::abs(grad[i]) < 1e-12);
            CHECK(std::abs(sol[i] - sol0[i]) < 1e-14);
        }
        x.leray(rnd.data());
        auto twice = rnd;
        x.leray(twice.data());
        double err = 0.0;
        for (std::size_t i = 0; i < rnd.size(); ++i) err = std::max(err, std::abs(twice[i] - rnd[i]));
        CHECK(err < 1e-13);
        CHECK(x.divergence_norm(rnd.data()) < 1e-12);
    }

    TEST_CASE("dealiasing keeps the two-thirds band")
    {
        TorusSpace x(2, 12);
        CHECK(x.kmax() == 3);
        std::vector<double> f(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::cos(2 * kPi * 5 * x.coordinate(i)[0]);
        CHECK(x.max_unresolved(f.data(), 1) == doctest::Approx(0.5));
        x.dealias(f.data(), 1);
        for (double v : f) CHECK(std::abs(v) < 1e-14);
        CHECK_THROWS_AS(TorusSpace(2, 7), Error);
    }
}

TEST_SUITE("q_space")
{
    TEST_CASE("basis is orthonormal Hermite products under the Gaussian")
    {
        auto d = test::disc(4, 5);
        const QSpace& q = d->q();
        CHECK(q.gram_error() < 1e-12);
        CHECK(q.size() == 21u);  // total degree <= 5 in two variables
        std::vector<double> vals(q.size());
        const double pt[2] = {0.7, -1.3};
        q.evaluate(std::span<const double>(pt, 2), vals.data());
        CHECK(vals[q.index_of({0, 0, 0})] == doctest::Approx(1.0));
        CHECK(vals[q.index_of({1, 0, 0})] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(vals[q.index_of({2, 0, 0})] == doctest::Approx((0.49 - 1.0) / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(vals[q.index_of({1, 1, 0})] == doctest::Approx(0.7 * -1.3).epsilon(1e-12));
        const double he3 = (-1.3 * -1.3 * -1.3 - 3 * -1.3) / std::sqrt(6.0);
        CHECK(std::abs(vals[q.index_of({0, 3, 0})]) == doctest::Approx(std::abs(he3)).epsilon(1e-12));
    }

    TEST_CASE("stiffness of Hermite products is the total degree")
    {
        auto d = test::disc(4, 6);
        const QSpace& q = d->q();
        const auto& S = q.stiffness();
        for (int l = 0; l < q.spring_size(); ++l)
            for (int m = 0; m < q.spring_size(); ++m)
                CHECK(S(l, m) == doctest::Approx(l == m ? q.total_degree(l) : 0.0).epsilon(1e-11).scale(1.0));
    }

    TEST_CASE("Kramers moments of the equilibrium are the identity")
    {
        auto d = test::disc(4, 4);
        const auto one = d->constant_density(1.0);
        std::vector<double> C(d->nx() * 4);
        d->q().kramers(0, one.coeffs.data(), C.data(), d->nx());
        for (std::size_t x = 0; x < d->nx(); ++x) {
            CHECK(C[4 * x] == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(std::abs(C[4 * x + 1]) < 1e-12);
            CHECK(C[4 * x + 3] == doctest::Approx(1.0).epsilon(1e-10));
        }
    }

    TEST_CASE("nodal evaluation and projection are inverse on the space")
    {
        auto d = test::disc(4, 4, 2);
        const auto psi = test::random_density(*d, 0.3, 4);
        std::vector<double> nodal(d->nx() * d->q().total_nodes()), back(psi.coeffs.size());
        d->q().evaluate_nodes(psi.coeffs.data(), nodal.data(), d->nx());
        d->q().project_nodes(nodal.data(), back.data(), d->nx(), false);
        double err = 0.0;
        for (std::size_t i = 0; i < back.size(); ++i) err = std::max(err, std::abs(back[i] - psi.coeffs[i]));
        CHECK(err < 1e-12);
    }
}

TEST_SUITE("discretization")
{
    TEST_CASE("integration by parts against trace-free matrices")
    {
        auto d = test::disc(4, 6);
        std::vector<double> phi(d->nq(), 0.0);
        phi[0] = 1.0;
        Eigen::MatrixXd B(2, 2);
        B << 0.3, -1.2, 0.8, -0.3;
        CHECK(d->ibp_residual(B, phi.data()) < 1e-14);
        std::mt19937_64 rng(17);
        std::normal_distribution<double> n;
        for (std::size_t l = 0; l < d->nq(); ++l) {
            std::fill(phi.begin(), phi.end(), 0.0);
            phi[l] = 1.0;
            Eigen::MatrixXd R(2, 2);
            R << n(rng), n(rng), n(rng), n(rng);
            R -= 0.5 * R.trace() * Eigen::MatrixXd::Identity(2, 2);
            CHECK(d->ibp_residual(R, phi.data()) < 1e-10);
        }
        CHECK_THROWS_AS(d->ibp_residual(Eigen::MatrixXd::Identity(2, 2), phi.data()), Error);
    }

    TEST_CASE("marginal of a random density matches direct quadrature")
    {
        auto d = test::disc(8, 4);
        const auto psi = test::random_density(*d, 0.4, 21);
        const auto z = d->marginal(psi);
        const auto& w = d->q().rule().weights;
        std::vector<double> nodal(d->nx() * d->q().total_nodes());
        d->q().evaluate_nodes(psi.coeffs.data(), nodal.data(), d->nx());
        double err = 0.0;
        for (std::size_t x = 0; x < d->nx(); ++x) {
            double s = 0.0;
            for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * nodal[x * w.size() + j];
            err = std::max(err, std::abs(s - z.values[x]));
        }
        CHECK(err < 1e-12);
        const auto c = d->marginal(d->constant_density(2.5));
        for (double v : c.values) CHECK(v == doctest::Approx(2.5));
    }

    TEST_CASE("no-slip boxes are gated off")
    {
        DomainSpec box;
        box.kind = DomainKind::NoSlipBox;
        CHECK_THROWS_AS(build_spaces(test::params(), make_chain(1, {}), Resolution{8, 4, 0, 0}, box), Error);
    }
}
