#include <doctest.h>

#include <cmath>

#include "polykinetic/config.hpp"
#include "polykinetic/diagnostics.hpp"
#include "polykinetic/errors.hpp"
#include "support.hpp"

using namespace polykinetic;

namespace {

constexpr double kPi = 3.141592653589793;

RunConfig small_config()
{
    RunConfig c;
    c.name = "small";
    c.resolution = Resolution{8, 3, 0, 0};
    c.physics.T = 0.1;
    c.steps = 3;
    return c;
}

} // namespace

TEST_SUITE("diagnostics")
{
    TEST_CASE("Poincare constants")
    {
        CHECK(poincare_constant(DomainSpec{}) == doctest::Approx(1.0 / (2 * kPi)));
        CHECK(poincare_constant(DomainSpec{DomainKind::PeriodicTorus, 2, 3.0}) == doctest::Approx(3.0 / (2 * kPi)));
        CHECK(poincare_constant(DomainSpec{DomainKind::NoSlipBox, 2, 1.0}) == doctest::Approx(1.0 / (kPi * std::sqrt(2.0))));
    }

    TEST_CASE("decay rate bound")
    {
        PhysicalParams p;
        CHECK(decay_rate_bound(p, 2.0, 1.0, {}) == doctest::Approx(1.0));
        p.nu = 1e-3;
        CHECK(decay_rate_bound(p, 2.0, 1.0, {}) == doctest::Approx(4 * kPi * kPi * 1e-3));
        p.nu = 1.0;
        p.lambda = 1e12;
        CHECK(decay_rate_bound(p, 2.0, 1.0, {}) < 1e-11);
    }

    TEST_CASE("free energy")
    {
        auto d = test::disc(8, 3);
        PhysicalParams p = test::params();
        p.k = 2.0;
        State s{0.0, 0, d->zero_velocity(), d->constant_density(1.0)};
        CHECK(free_energy(*d, p, s) == 0.0);
        const double a = 0.4;
        for (std::size_t i = 0; i < d->nx(); ++i) s.u.values[2 * i] = a * std::sin(2 * kPi * d->x().coordinate(i)[1]);
        CHECK(free_energy(*d, p, s) == doctest::Approx(a * a / 4.0).epsilon(1e-13));
        s.psi = d->constant_density(std::exp(1.0));
        CHECK(free_energy(*d, p, s) == doctest::Approx(a * a / 4.0 + p.k * 1.0).epsilon(1e-13));
    }

    TEST_CASE("decay fit")
    {
        std::vector<double> t, q;
        for (int i = 0; i <= 20; ++i) {
            t.push_back(0.1 * i);
            q.push_back(3.0 * std::exp(-2.5 * t.back()));
        }
        CHECK(decay_fit(t, q) == doctest::Approx(2.5).epsilon(1e-12));

        RunConfig c = small_config();
        const RunTrace eq = run(make_setup(c));
        try {
            decay_fit(eq);
            FAIL("expected insufficient signal");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InsufficientSignal);
        }
    }

    TEST_CASE("energy budget audit")
    {
        const RunTrace eq = run(make_setup(small_config()));
        const auto ok = energy_budget_audit(eq);
        CHECK(ok.first_violation == -1);
        for (double s : ok.slack) CHECK(s >= 0.0);
        RunTrace bad = eq;
        bad.records[1].kinetic_energy += 0.5;
        const auto flagged = energy_budget_audit(bad);
        CHECK(flagged.first_violation == bad.records[1].step);
    }

    TEST_CASE("moment audit")
    {
        auto d = test::disc(8, 4);
        const auto m = moment_audit(*d, d->constant_density(1.0), 1e9);
        REQUIRE(m.values.size() == 1);
        CHECK(m.values[0] == doctest::Approx(2.0 * d->x().volume()).epsilon(1e-10));
        const auto z = moment_audit(*d, d->constant_density(0.0), 0.0);
        CHECK(z.values[0] == 0.0);
        CHECK(z.pass);

        CHECK(energy_bound_sq(1.0, 0.5, 2.0, 3.0, 0.25) == doctest::Approx(1.0 + 0.25 + 1.5));
        const double b1 = moment_bound(*d, test::params(), 1.0), b4 = moment_bound(*d, test::params(), 4.0);
        CHECK(b4 > b1);
    }
}
