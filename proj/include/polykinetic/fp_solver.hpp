#pragma once

#include <limits>

#include "polykinetic/discretization.hpp"
#include "polykinetic/krylov.hpp"

namespace polykinetic {

struct PicardOptions {
    double tol = 1e-10;  // on the frozen cut-off excess, relative to ||psi||
    int max_iter = 50;
    int damping_after = 10;
    double damping = 0.5;
    double delta0 = 1e-4;
    double delta_min = 1e-12;
    KrylovOptions krylov{};
};

struct FpReport {
    int picard_iterations = 0;
    int krylov_iterations = 0;
    bool cutoff_active = false;
    bool used_delta = false;
    double delta = 0.0;
    double increment = 0.0;
};

// Implicit Euler Fokker-Planck step: transport by u_prev, drag by sigma(u_curr) acting on beta^L(psi).
// guess (optional) seeds the Picard iteration and the Krylov solves.
ConfigurationDensity fp_step(const Discretization& disc, const PhysicalParams& params,
                             const ConfigurationDensity& psi_prev, const VelocityField& u_prev,
                             const VelocityField& u_curr, double dt, double L, const PicardOptions& options = {},
                             FpReport* report = nullptr, const ConfigurationDensity* guess = nullptr);

MarginalDensity marginal(const Discretization& disc, const ConfigurationDensity& psi);

// zeta + dt (u_prev . grad zeta - epsilon lap zeta) = zeta_prev on the resolved modes.
MarginalDensity marginal_step(const Discretization& disc, double epsilon, const MarginalDensity& zeta_prev,
                              const VelocityField& u_prev, double dt);

// Projection of the nodal min(psi, L) onto the discrete space; returns psi unchanged when psi < L at every node.
ConfigurationDensity apply_cutoff(const Discretization& disc, const ConfigurationDensity& psi, double L,
                                  bool* active = nullptr);

// One implicit heat step in the (x, q) metric applied to beta^L(psi0).
ConfigurationDensity lift_initial_density(const Discretization& disc, const ConfigurationDensity& psi0, double dt,
                                          double L);

} // namespace polykinetic
