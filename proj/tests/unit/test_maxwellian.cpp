#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "polykinetic/errors.hpp"
#include "polykinetic/maxwellian.hpp"

using namespace polykinetic;

namespace {

double double_factorial(int n)
{
    double r = 1.0;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

// E[q1^a q2^b] under the 2D standard Gaussian.
double gaussian_moment(int a, int b)
{
    if (a % 2 || b % 2) return 0.0;
    return double_factorial(a - 1) * double_factorial(b - 1);
}

} // namespace

TEST_SUITE("maxwellian")
{
    TEST_CASE("piecewise potential")
    {
        const PotentialSpec p{2.0, 1.0};
        CHECK(potential(0.5, p, 0) == doctest::Approx(0.5));
        CHECK(potential(2.0, p, 0) == doctest::Approx(2.5));
        CHECK(potential(1.0, p, 1) == doctest::Approx(1.0));
        CHECK(potential(1.0, PotentialSpec{3.5, 1.0}, 1) == doctest::Approx(1.0));
        // C^1 across the crossover for a non-integer exponent
        const PotentialSpec q{2.7, 3.0};
        CHECK(potential(3.0 - 1e-9, q, 0) == doctest::Approx(potential(3.0 + 1e-9, q, 0)).epsilon(1e-8));
        CHECK(potential(3.0 - 1e-9, q, 1) == doctest::Approx(potential(3.0 + 1e-9, q, 1)).epsilon(1e-8));
        const double h = 1e-5;
        CHECK(potential(5.0, q, 1) ==
              doctest::Approx((potential(5.0 + h, q, 0) - potential(5.0 - h, q, 0)) / (2 * h)).epsilon(1e-8));
        CHECK_THROWS_AS(potential(-1.0, p, 0), Error);
    }

    TEST_CASE("Gauss-Legendre exactness")
    {
        const auto r = gauss_legendre(5);
        for (int p = 0; p <= 9; ++p) {
            double s = 0.0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
            CHECK(s == doctest::Approx(p % 2 ? 0.0 : 2.0 / (p + 1)).epsilon(1e-14));
        }
    }

    TEST_CASE("Stieltjes and Golub-Welsch recover Gauss-Hermite on a fine discrete Gaussian")
    {
        std::vector<double> x, w;
        const auto gl = gauss_legendre(400);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = 12.0 * gl.nodes[i];
            x.push_back(t);
            w.push_back(12.0 * gl.weights[i] * std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI));
        }
        const auto rec = stieltjes(x, w, 6);
        for (int k = 1; k < 6; ++k) {
            CHECK(rec.alpha[k] == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(rec.beta[k] == doctest::Approx(static_cast<double>(k)).epsilon(1e-10));
        }
        const auto g = golub_welsch(rec, 3);
        // probabilists' Hermite nodes for n = 3: 0, +-sqrt(3), weights 2/3, 1/6
        CHECK(g.nodes[1] == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(std::abs(g.nodes[2]) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
        CHECK(g.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    }

    TEST_CASE("near-Gaussian Maxwellian")
    {
        const PotentialSpec pot{2.0, 60.0};
        const int P = 6;
        MaxwellianModel m(pot, 1, 2, default_quadrature_resolution(P, 2));
        const std::vector<double> origin{0.0, 0.0};
        CHECK(m.density(origin) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n(0.0, 1.5);
        for (int i = 0; i < 10; ++i) {
            const std::vector<double> q{n(rng), n(rng)}, mq{-q[0], -q[1]};
            CHECK(m.density(q) == doctest::Approx(m.density(mq)).epsilon(1e-15));
        }
        CHECK(m.second_moment() == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(m.theta_moment() == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(m.bakry_emery_modulus() == doctest::Approx(1.0).epsilon(1e-12));

        const auto& rule = m.rule();
        double sum = 0.0;
        for (double w : rule.weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        for (int a = 0; a <= rule.exactness_degree; ++a)
            for (int b = 0; a + b <= rule.exactness_degree; ++b) {
                double s = 0.0;
                for (std::size_t j = 0; j < rule.size(); ++j)
                    s += rule.weights[j] * std::pow(rule.point(j)[0], a) * std::pow(rule.point(j)[1], b);
                CHECK(s == doctest::Approx(gaussian_moment(a, b)).epsilon(1e-10).scale(1.0));
            }
    }

    TEST_CASE("second moment is additive over springs")
    {
        MaxwellianModel m(PotentialSpec{2.0, 60.0}, 2, 2, default_quadrature_resolution(4, 2));
        CHECK(m.second_moment() == doctest::Approx(4.0).epsilon(1e-10));
    }

    TEST_CASE("FENE-free stiffening keeps the log-Sobolev modulus at least one")
    {
        CHECK(bakry_emery_modulus(PotentialSpec{2.0, 1.0}) >= 1.0);
        CHECK(bakry_emery_modulus(PotentialSpec{3.0, 4.0}) >= 1.0);
    }
}
