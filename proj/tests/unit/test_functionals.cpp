#include <doctest.h>

#include <cmath>

#include "polykinetic/errors.hpp"
#include "polykinetic/functionals.hpp"
#include "polykinetic/initial_data.hpp"
#include "support.hpp"

using namespace polykinetic;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_SUITE("functionals")
{
    TEST_CASE("relative entropy of constants")
    {
        auto d = test::disc(8, 3);
        const double vol = d->x().volume();
        CHECK(std::abs(relative_entropy(*d, d->constant_density(1.0))) < 1e-15);
        CHECK(relative_entropy(*d, d->constant_density(std::exp(1.0))) == doctest::Approx(vol).epsilon(1e-13));
        CHECK(relative_entropy(*d, d->constant_density(0.0)) == doctest::Approx(vol).epsilon(1e-13));
    }

    TEST_CASE("q-Fisher information against finite differences of the basis")
    {
        auto d = test::disc(4, 4);
        const QSpace& q = d->q();
        const int l = q.index_of({1, 1, 0});
        for (double a : {0.005, 0.01}) {
            auto psi = d->constant_density(1.0);
            for (std::size_t i = 0; i < d->nx(); ++i) psi.coeffs[i * d->nq() + l] = a;
            // |grad psi|^2 / psi at the rule nodes, gradients by central differences of point evaluation
            std::vector<double> v(q.size());
            auto value = [&](double x, double y) {
                const double pt[2] = {x, y};
                q.evaluate(std::span<const double>(pt, 2), v.data());
                return 1.0 + a * v[l];
            };
            const auto& rule = q.rule();
            const double h = 1e-5;
            double ref = 0.0;
            for (std::size_t j = 0; j < rule.size(); ++j) {
                const double x = rule.point(j)[0], y = rule.point(j)[1];
                const double gx = (value(x + h, y) - value(x - h, y)) / (2 * h);
                const double gy = (value(x, y + h) - value(x, y - h)) / (2 * h);
                ref += rule.weights[j] * (gx * gx + gy * gy) / value(x, y);
            }
            const double I = fisher_information(*d, psi, Direction::Q);
            CHECK(I == doctest::Approx(ref * d->x().volume()).epsilon(1e-8));
            // leading order a^2 int M |grad phi|^2 = 2 a^2 for phi = q1 q2
            CHECK(I == doctest::Approx(2.0 * a * a).epsilon(5.0 * a));
        }
    }

    TEST_CASE("x-Fisher information of a marginal wave")
    {
        auto d = test::disc(32, 2);
        const double a = 0.3;
        auto psi = d->constant_density(1.0);
        for (std::size_t i = 0; i < d->nx(); ++i) psi.coeffs[i * d->nq()] = 1.0 + a * std::cos(2 * kPi * d->x().coordinate(i)[0]);
        double ref = 0.0;
        const int m = 200000;
        for (int i = 0; i < m; ++i) {
            const double t = (i + 0.5) / m;
            const double s = 2 * kPi * a * std::sin(2 * kPi * t);
            ref += s * s / (1.0 + a * std::cos(2 * kPi * t)) / m;
        }
        CHECK(fisher_information(*d, psi, Direction::X) == doctest::Approx(ref).epsilon(1e-9));
    }

    TEST_CASE("Fisher information: constants, homogeneity, negativity")
    {
        auto d = test::disc(8, 4);
        CHECK(fisher_information(*d, d->constant_density(3.0), Direction::Q) == 0.0);
        CHECK(fisher_information(*d, d->constant_density(3.0), Direction::X) < 1e-25);
        const auto psi = stretched(*d, 0.5, {1, 1, 0}, 0.4);
        auto scaled = psi;
        for (auto& c : scaled.coeffs) c *= 2.5;
        for (auto dir : {Direction::X, Direction::Q})
            CHECK(fisher_information(*d, scaled, dir) ==
                  doctest::Approx(2.5 * fisher_information(*d, psi, dir)).epsilon(1e-12));

        auto neg = d->constant_density(1.0);
        neg.coeffs[d->q().index_of({1, 0, 0})] = 3.0;
        try {
            relative_entropy(*d, neg);
            FAIL("expected a negativity error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Negativity);
        }
        CHECK_THROWS_AS(fisher_information(*d, neg, Direction::Q), Error);
    }

    TEST_CASE("inequality audits")
    {
        auto d = test::disc(8, 4);
        const auto eq = inequality_audits(*d, d->constant_density(1.0), 1.0);
        CHECK(std::abs(eq.csiszar_kullback_gap) < 1e-14);
        CHECK(std::abs(eq.log_sobolev_gap) < 1e-14);
        for (double a : {0.05, 0.3, 0.8}) {
            const auto r = inequality_audits(*d, stretched(*d, a, {1, 0, 0}, 0.7), 1.0);
            CHECK(r.csiszar_kullback_gap >= -1e-9);
            CHECK(r.log_sobolev_gap >= -1e-9);
        }
        CHECK(log_young_samples() >= -1e-13);
    }

    TEST_CASE("mass and extrema bookkeeping")
    {
        auto d = test::disc(8, 4);
        const auto v = evaluate_functionals(*d, stretched(*d, 0.3, {0, 1, 0}, 0.0), 2.0);
        CHECK(v.mass_min == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(v.mass_max == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(v.psi_min > 0.0);
        CHECK(v.entropy_L >= v.relative_entropy - 1e-14);
        CHECK(v.cutoff_fraction >= 0.0);
        CHECK(v.cutoff_fraction <= 1.0);
    }
}
