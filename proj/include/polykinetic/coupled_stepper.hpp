#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polykinetic/diagnostics.hpp"
#include "polykinetic/fp_solver.hpp"
#include "polykinetic/ns_solver.hpp"

namespace polykinetic {

struct StepOptions {
    PicardOptions picard{};
    double outer_tol = 1e-10;
    int max_outer = 30;
    int max_halvings = 4;
};

struct StepReport {
    int outer_iterations = 0;
    std::vector<double> increments;  // relative psi increments per outer iteration
    double contraction = 0.0;        // geometric mean ratio of successive increments
    double velocity_increment = 0.0; // change of u in the final momentum re-solve, relative
    int substeps = 1;
    int picard_iterations = 0;
    int krylov_iterations = 0;
    bool cutoff_active = false;
};

// One step of the coupled scheme: fixed point of (psi -> u = NS(psi) -> FP(u)). Sub-steps with halved dt on failure.
State coupled_step(const Discretization& disc, const PhysicalParams& params, const State& state,
                   const VelocityField& f_n, double dt, double L, const StepOptions& options = {},
                   StepReport* report = nullptr);

struct InitialData {
    VelocityField u0;
    ConfigurationDensity psi0;
};

struct RunSetup {
    PhysicalParams params;
    ChainSpec chain;
    CutoffSchedule schedule;
    Resolution resolution;
    DomainSpec domain{};
    StepOptions step{};
    std::function<InitialData(const Discretization&)> initial;
    std::string fingerprint;
    bool keep_velocity_history = false;
    bool keep_psi_history = false;
    bool frozen_velocity = false;  // u held at zero and the momentum solve skipped
    std::string failure_checkpoint;  // written with the last good state when a step fails
    std::function<void(const DiagnosticsRecord&, const State&)> observer;
};

RunTrace run(const RunSetup& setup);
RunTrace run(const RunSetup& setup, const Discretization& disc);

} // namespace polykinetic
