#pragma once

#include <memory>
#include <random>

#include "polykinetic/discretization.hpp"
#include "polykinetic/model_params.hpp"

namespace test {

inline polykinetic::PhysicalParams params(int K = 1)
{
    polykinetic::PhysicalParams p;
    p.K = K;
    return p;
}

// Near-Gaussian model: the Hookean branch covers every quadrature node.
inline std::unique_ptr<polykinetic::Discretization> disc(int n = 8, int P = 4, int K = 1, double s_inf = 60.0)
{
    polykinetic::PotentialSpec pot;
    pot.s_inf = s_inf;
    return polykinetic::build_spaces(params(K), polykinetic::make_chain(K, pot), polykinetic::Resolution{n, P, 0, 0});
}

// Random coefficients, band-limited in x, positive at every node for small amplitude.
inline polykinetic::ConfigurationDensity random_density(const polykinetic::Discretization& d, double amp,
                                                        unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto psi = d.constant_density(1.0);
    const auto& x = d.x();
    for (std::size_t l = 1; l < d.nq(); ++l) {
        const double a = amp * u(rng) / static_cast<double>(l * l), ph = 3.0 * u(rng);
        const int k1 = static_cast<int>(l % 3), k2 = static_cast<int>((l / 3) % 2);
        for (std::size_t i = 0; i < d.nx(); ++i) {
            const auto c = x.coordinate(i);
            psi.coeffs[i * d.nq() + l] = a * std::cos(2.0 * 3.141592653589793 * (k1 * c[0] + k2 * c[1]) + ph);
        }
    }
    return psi;
}

} // namespace test
