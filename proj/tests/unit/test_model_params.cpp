#include <doctest.h>

#include <cmath>

#include "polykinetic/errors.hpp"
#include "polykinetic/model_params.hpp"

using namespace polykinetic;

TEST_SUITE("model_params")
{
    TEST_CASE("rouse matrices and their smallest eigenvalue")
    {
        auto r1 = rouse_matrix(1);
        CHECK(r1.A.rows() == 1);
        CHECK(r1.A(0, 0) == 2.0);
        CHECK(r1.a0 == doctest::Approx(2.0).epsilon(1e-14));

        auto r2 = rouse_matrix(2);
        CHECK(r2.A(0, 1) == -1.0);
        CHECK(r2.A(1, 0) == -1.0);
        CHECK(r2.a0 == doctest::Approx(1.0).epsilon(1e-14));

        // tridiag[-1, 2, -1] spectrum: 2 - 2 cos(j pi / (K + 1))
        for (int K = 3; K <= 6; ++K)
            CHECK(rouse_matrix(K).a0 == doctest::Approx(2.0 - 2.0 * std::cos(M_PI / (K + 1))).epsilon(1e-13));
        CHECK_THROWS_AS(rouse_matrix(0), Error);
    }

    TEST_CASE("cutoff schedule links dt to L")
    {
        CHECK(cutoff_schedule(2.0, 1.0, 1.0).dt == doctest::Approx(0.5));
        CHECK(cutoff_schedule(std::exp(1.0), std::exp(1.0), 1.0).dt == doctest::Approx(1.0));
        auto s = cutoff_schedule(10.0, 1.0, 1.0);
        CHECK(s.N == 24);
        CHECK(s.dt == doctest::Approx(1.0 / 24.0));
        CHECK(s.dt <= s.C0 / (s.L * std::log(s.L)));
        CHECK(s.linked);
        CHECK_THROWS_AS(cutoff_schedule(1.0, 1.0, 1.0), Error);

        auto f = fixed_step_schedule(10.0, 1.0, 7);
        CHECK_FALSE(f.linked);
        CHECK(f.dt == doctest::Approx(1.0 / 7.0));
    }

    TEST_CASE("validation collects every violation")
    {
        PhysicalParams p;
        const ChainSpec chain = make_chain(1, {});
        CHECK_NOTHROW(validate_params(p, chain));

        p.nu = 0.0;
        try {
            validate_params(p, chain);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidParameter);
            CHECK(std::string(e.what()).find("nu must be > 0") != std::string::npos);
        }

        PhysicalParams q;
        ChainSpec bad = make_chain(1, PotentialSpec{1.0, 4.0});
        q.lambda = -1.0;
        try {
            validate_params(q, bad);
            FAIL("expected an error");
        } catch (const Error& e) {
            const std::string m = e.what();
            CHECK(m.find("theta must exceed 1") != std::string::npos);
            CHECK(m.find("lambda must be > 0") != std::string::npos);
        }
    }

    TEST_CASE("growth constants follow the potential")
    {
        const auto g = growth_constants(PotentialSpec{2.0, 4.0});
        CHECK(g.c1 > 0.0);
        CHECK(g.c3 >= 0.0);
    }
}
