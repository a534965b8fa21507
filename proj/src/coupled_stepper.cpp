#include "polykinetic/coupled_stepper.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "polykinetic/checkpoint.hpp"
#include "polykinetic/errors.hpp"
#include "polykinetic/kernels.hpp"

namespace polykinetic {

namespace {

double diff_norm(const RealVector& a, const RealVector& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double norm(const RealVector& a)
{
    return kernels::nrm2({a.data(), a.size()});
}

bool attempt(const Discretization& disc, const PhysicalParams& params, const State& state, const VelocityField& f_n,
             double dt, double L, const StepOptions& opt, StepReport& rep, State& out)
{
    ConfigurationDensity psi = state.psi;
    VelocityField u = state.u;
    rep.increments.clear();
    for (int p = 1; p <= opt.max_outer; ++p) {
        NsReport nr;
        u = ns_step(disc, params, state.u, psi, f_n, dt, &nr, &u);
        FpReport fr;
        ConfigurationDensity next = fp_step(disc, params, state.psi, state.u, u, dt, L, opt.picard, &fr, &psi);
        rep.picard_iterations += fr.picard_iterations;
        rep.krylov_iterations += fr.krylov_iterations + nr.krylov_iterations;
        rep.cutoff_active = fr.cutoff_active;
        const double inc = diff_norm(next.coeffs, psi.coeffs) / std::max(norm(next.coeffs), 1e-300);
        rep.increments.push_back(inc);
        rep.outer_iterations = p;
        psi = std::move(next);
        if (inc <= opt.outer_tol) {
            const VelocityField u_final = ns_step(disc, params, state.u, psi, f_n, dt, nullptr, &u);
            rep.velocity_increment = diff_norm(u_final.values, u.values) /
                                     std::max(norm(u_final.values), std::max(norm(psi.coeffs), 1e-300));
            out.u = u_final;
            out.psi = std::move(psi);
            out.t = state.t + dt;
            out.step = state.step + 1;
            const auto& incs = rep.increments;
            if (incs.size() >= 2 && incs.front() > 0.0 && incs.back() > 0.0)
                rep.contraction = std::pow(incs.back() / incs.front(), 1.0 / (incs.size() - 1));
            return true;
        }
    }
    return false;
}

State step_recursive(const Discretization& disc, const PhysicalParams& params, const State& state,
                     const VelocityField& f_n, double dt, double L, const StepOptions& opt, StepReport& rep, int depth)
{
    State out;
    bool ok = false;
    try {
        ok = attempt(disc, params, state, f_n, dt, L, opt, rep, out);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Solver) throw;
        spdlog::warn("coupled_step: {}", e.what());
    }
    if (ok) return out;
    if (depth >= opt.max_halvings)
        fail(ErrorKind::Solver, "coupled_step: outer iteration failed to converge after dt halving");
    spdlog::warn("coupled_step: outer iteration did not converge at dt = {:.6g}; halving", dt);
    State mid = step_recursive(disc, params, state, f_n, 0.5 * dt, L, opt, rep, depth + 1);
    State end = step_recursive(disc, params, mid, f_n, 0.5 * dt, L, opt, rep, depth + 1);
    end.t = state.t + dt;
    end.step = state.step + 1;
    rep.substeps = std::max(rep.substeps, 1 << (depth + 1));
    return end;
}

} // namespace

State coupled_step(const Discretization& disc, const PhysicalParams& params, const State& state,
                   const VelocityField& f_n, double dt, double L, const StepOptions& options, StepReport* report)
{
    StepReport rep;
    State out = step_recursive(disc, params, state, f_n, dt, L, options, rep, 0);
    if (report) *report = rep;
    return out;
}

RunTrace run(const RunSetup& setup)
{
    const auto disc = build_spaces(setup.params, setup.chain, setup.resolution, setup.domain);
    return run(setup, *disc);
}

RunTrace run(const RunSetup& setup, const Discretization& disc)
{
    const PhysicalParams& p = setup.params;
    const CutoffSchedule& sch = setup.schedule;
    const double kappa = disc.maxwellian().bakry_emery_modulus();
    const TorusSpace& xs = disc.x();

    RunTrace trace;
    trace.fingerprint = setup.fingerprint;
    trace.params = p;
    trace.a0 = setup.chain.a0;
    trace.kappa = kappa;
    trace.L = sch.L;

    InitialData init = setup.initial ? setup.initial(disc) : InitialData{disc.zero_velocity(), disc.constant_density(1.0)};
    const double u0_sq = xs.l2_norm_sq(init.u0.values.data(), disc.dim());
    const double entropy0 = evaluate_functionals(disc, init.psi0).relative_entropy;

    State state;
    state.u = setup.frozen_velocity ? disc.zero_velocity() : lift_initial_velocity(disc, init.u0, sch.dt);
    state.psi = apply_cutoff(disc, lift_initial_density(disc, init.psi0, sch.dt, sch.L), sch.L);

    // B^2 with the time integral of the force dual norm over [0, T]
    double force_integral = 0.0;
    std::vector<VelocityField> forces;
    for (int n = 1; n <= sch.N; ++n) {
        forces.push_back(average_force(disc, p.body_force, n, sch.dt));
        force_integral += sch.dt * xs.h1_dual_norm_sq(forces.back().values.data());
    }
    const double B_sq = energy_bound_sq(u0_sq, force_integral, p.nu, p.k, entropy0);
    trace.moment_bound = moment_bound(disc, p, B_sq);

    trace.initial = measure(disc, p, state, sch.L, kappa);
    EnergyBudget budget(p, setup.chain.a0);
    budget.start(trace.initial);
    trace.initial.energy_budget_slack = budget.slack();
    if (setup.keep_velocity_history) trace.velocity_history.push_back(state.u);
    if (setup.keep_psi_history) trace.psi_history.push_back(state.psi);
    auto check_moments = [&](const DiagnosticsRecord& r) {
        for (double m : r.moment_theta)
            if (!(m <= trace.moment_bound)) trace.moments_within_bound = false;
    };
    check_moments(trace.initial);

    for (int n = 1; n <= sch.N; ++n) {
        const VelocityField& f = forces[n - 1];
        StepReport rep;
        State next;
        try {
            if (setup.frozen_velocity) {
                FpReport fr;
                next.psi = fp_step(disc, p, state.psi, state.u, state.u, sch.dt, sch.L, setup.step.picard, &fr);
                next.u = state.u;
                next.t = state.t + sch.dt;
                next.step = state.step + 1;
                rep.outer_iterations = 1;
                rep.picard_iterations = fr.picard_iterations;
            } else {
                next = coupled_step(disc, p, state, f, sch.dt, sch.L, setup.step, &rep);
            }
        } catch (const Error& e) {
            if (!setup.failure_checkpoint.empty()) {
                write_checkpoint(setup.failure_checkpoint, state, trace.fingerprint, setup.resolution);
                spdlog::error("step {} failed; last good state written to {}", n, setup.failure_checkpoint);
            }
            throw;
        }
        next.t = n * sch.dt;
        state = std::move(next);
        DiagnosticsRecord r = measure(disc, p, state, sch.L, kappa);
        r.dt = sch.dt;
        r.force_dual_sq = xs.h1_dual_norm_sq(f.values.data());
        r.outer_iterations = rep.outer_iterations;
        r.picard_iterations = rep.picard_iterations;
        budget.add(r);
        r.energy_budget_slack = budget.slack();
        check_moments(r);
        spdlog::debug("step {} t={:.6f} F={:.6e} slack={:.3e} outer={} contraction={:.3e}", n, r.t, r.free_energy,
                      r.energy_budget_slack, rep.outer_iterations, rep.contraction);
        if (setup.observer) setup.observer(r, state);
        if (setup.keep_velocity_history) trace.velocity_history.push_back(state.u);
        if (setup.keep_psi_history) trace.psi_history.push_back(state.psi);
        trace.records.push_back(std::move(r));
    }
    trace.final_state = std::move(state);
    return trace;
}

} // namespace polykinetic
