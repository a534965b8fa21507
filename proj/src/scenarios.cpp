#include "polykinetic/scenarios.hpp"

#include "polykinetic/errors.hpp"

namespace polykinetic {

std::vector<std::string> scenario_names()
{
    return {"decay-demo", "equilibrium", "forced", "ou-oracle", "dumbbell-k2"};
}

RunConfig scenario_config(const std::string& name)
{
    RunConfig c;
    c.name = name;
    c.resolution = Resolution{32, 8, 0, 0};
    if (name == "decay-demo") {
        // perturbed polymer stretch plus a Taylor-Green vortex, no forcing
        c.physics.T = 2.0;
        c.L = 10.0;
        c.initial.velocity = VelocityPreset::TaylorGreen;
        c.initial.velocity_amplitude = 0.1;
        c.initial.density = DensityPreset::Stretched;
        c.initial.density_amplitude = 0.3;
        c.initial.density_xmode = {1, 1, 0};
        return c;
    }
    if (name == "equilibrium") {
        // T chosen so the linked schedule gives exactly 100 steps
        c.physics.T = 2.16;
        c.L = 10.0;
        return c;
    }
    if (name == "forced") {
        c.physics.T = 1.0;
        c.L = 10.0;
        c.physics.body_force = ForceSpec{ForceKind::Sinusoidal, 2.0, {0, 1, 0}, ForceTimeProfile::Cosine, 3.0};
        c.initial.density = DensityPreset::Stretched;
        c.initial.density_amplitude = 0.2;
        c.initial.density_xmode = {1, 0, 0};
        return c;
    }
    if (name == "ou-oracle") {
        // Hookean over the whole resolved region, velocity frozen at zero
        c.physics.T = 0.5;
        c.potential.s_inf = 60.0;
        c.L = 10.0;
        c.steps = 10;
        c.resolution = Resolution{8, 6, 0, 0};
        c.frozen_velocity = true;
        c.initial.density = DensityPreset::PerturbedMode;
        c.initial.density_amplitude = 0.1;
        c.initial.density_qmode = {1, 0, 0};
        return c;
    }
    if (name == "dumbbell-k2") {
        c.physics.K = 2;
        c.physics.T = 0.25;
        c.L = 10.0;
        c.resolution = Resolution{16, 4, 0, 0};
        c.initial.density = DensityPreset::Stretched;
        c.initial.density_amplitude = 0.3;
        c.initial.density_xmode = {1, 1, 0};
        return c;
    }
    fail(ErrorKind::Config, "unknown scenario '" + name + "'");
}

} // namespace polykinetic
