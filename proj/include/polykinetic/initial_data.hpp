#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "polykinetic/discretization.hpp"

namespace polykinetic {

enum class VelocityPreset { Zero, TaylorGreen, Shear };
enum class DensityPreset { Equilibrium, PerturbedMode, Stretched, Random, File };

struct InitialSpec {
    VelocityPreset velocity = VelocityPreset::Zero;
    double velocity_amplitude = 0.0;
    DensityPreset density = DensityPreset::Equilibrium;
    double density_amplitude = 0.0;
    std::array<int, 3> density_xmode{0, 0, 0};
    std::array<int, 3> density_qmode{1, 0, 0};  // q-exponents of the perturbed basis function (spring 0)
    double density_angle = 0.0;                 // stretching direction in the (q1, q2) plane
    std::string density_file;
    std::uint64_t seed = 1;

    bool operator==(const InitialSpec&) const = default;
};

VelocityField make_velocity(const Discretization& disc, VelocityPreset preset, double amplitude);

// 1 + a cos(2 pi k.x) phi(q) with phi the basis function of the given exponents on spring 0.
ConfigurationDensity perturbed_mode(const Discretization& disc, double amplitude, std::array<int, 3> xmode,
                                    std::array<int, 3> qexps);

// 1 + a g(x) [(v.q_i)^2 - E(v.q_i)^2] / E(v.q_i)^2 averaged over springs, g = (1 + cos(2 pi k.x)) / 2.
// Positive for a < 1 and of unit marginal.
ConfigurationDensity stretched(const Discretization& disc, double amplitude, std::array<int, 3> xmode, double angle);

// Three stretched terms with random directions, modes and phases; positive with unit marginal.
ConfigurationDensity random_density(const Discretization& disc, double amplitude, std::uint64_t seed);

ConfigurationDensity make_density(const Discretization& disc, const InitialSpec& spec);

} // namespace polykinetic
