#pragma once

#include <vector>

#include "polykinetic/discretization.hpp"
#include "polykinetic/krylov.hpp"

namespace polykinetic {

// Kramers expression on the grid. Matrices are nx x d^2, row-major per point.
struct StressField {
    std::vector<RealVector> C;  // one per spring
    RealVector tau;             // k (sum_i C_i - rho I)
    RealVector rho;             // nx
};

StressField kramers_stress(const Discretization& disc, const ConfigurationDensity& psi, double k);

struct NsReport {
    int krylov_iterations = 0;
    double divergence = 0.0;
};

// Semi-implicit step: u + dt P[(u_prev . grad) u] - dt nu lap u = u_prev + dt P f + dt k P div(sum_i C_i(psi)).
VelocityField ns_step(const Discretization& disc, const PhysicalParams& params, const VelocityField& u_prev,
                      const ConfigurationDensity& psi_curr, const VelocityField& f_curr, double dt,
                      NsReport* report = nullptr, const VelocityField* guess = nullptr);

// One implicit Stokes-type smoothing step: (1 - dt lap) u0_lifted = P u0.
VelocityField lift_initial_velocity(const Discretization& disc, const VelocityField& u0, double dt);

// Time average of the body force over [(n-1) dt, n dt], Leray-projected.
VelocityField average_force(const Discretization& disc, const ForceSpec& spec, int n, double dt);
// Instantaneous force field at time t (not projected).
VelocityField evaluate_force(const Discretization& disc, const ForceSpec& spec, double t);

} // namespace polykinetic
