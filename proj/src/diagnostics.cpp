#include "polykinetic/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "polykinetic/errors.hpp"

namespace polykinetic {

DiagnosticsRecord measure(const Discretization& disc, const PhysicalParams& params, const State& state, double L,
                          double kappa)
{
    const TorusSpace& xs = disc.x();
    const int d = xs.dim();
    DiagnosticsRecord r;
    r.step = state.step;
    r.t = state.t;
    const double usq = xs.l2_norm_sq(state.u.values.data(), d);
    r.kinetic_energy = 0.5 * usq;
    r.grad_u_sq = xs.h1_seminorm_sq(state.u.values.data(), d);
    r.divergence = xs.divergence_norm(state.u.values.data());

    const FunctionalValues v = evaluate_functionals(disc, state.psi, L);
    r.relative_entropy = v.relative_entropy;
    r.relative_entropy_k = params.k * v.relative_entropy;
    r.entropy_L = v.entropy_L;
    r.fisher_x = v.fisher_x;
    r.fisher_q = v.fisher_q;
    r.fisher_q_L = v.fisher_q_L;
    r.free_energy = r.kinetic_energy + r.relative_entropy_k;
    r.mass_min = v.mass_min;
    r.mass_max = v.mass_max;
    r.psi_min = v.psi_min;
    r.psi_max = v.psi_max;
    r.cutoff_active_fraction = v.cutoff_fraction;
    const InequalityAudit a = inequality_audits(v, xs.volume(), kappa);
    r.ck_gap = a.csiszar_kullback_gap;
    r.ls_gap = a.log_sobolev_gap;
    r.log_young_min = a.log_young_min;

    RealVector m(disc.nx());
    for (int i = 0; i < disc.springs(); ++i) {
        disc.q().theta_moment(i, state.psi.coeffs.data(), m.data(), disc.nx());
        r.moment_theta.push_back(xs.integral(m.data(), 1, 0));
    }
    return r;
}

double free_energy(const Discretization& disc, const PhysicalParams& params, const State& state)
{
    const double ke = 0.5 * disc.x().l2_norm_sq(state.u.values.data(), disc.dim());
    return ke + params.k * evaluate_functionals(disc, state.psi).relative_entropy;
}

double poincare_constant(const DomainSpec& domain)
{
    if (!(domain.side > 0.0)) fail(ErrorKind::InvalidParameter, "poincare_constant: side must be > 0");
    switch (domain.kind) {
    case DomainKind::PeriodicTorus: {
        // first nonzero eigenvalue of -lap on mean-zero periodic fields: (2 pi / side)^2
        const double lam = std::pow(2.0 * std::numbers::pi / domain.side, 2);
        return 1.0 / std::sqrt(lam);
    }
    case DomainKind::NoSlipBox: {
        const double lam = domain.dim * std::pow(std::numbers::pi / domain.side, 2);
        return 1.0 / std::sqrt(lam);
    }
    }
    fail(ErrorKind::InvalidParameter, "poincare_constant: unsupported domain");
}

double decay_rate_bound(const PhysicalParams& params, double a0, double kappa, const DomainSpec& domain)
{
    const double cp = poincare_constant(domain);
    return std::min(params.nu / (cp * cp), kappa * a0 / (2.0 * params.lambda));
}

EnergyBudget::EnergyBudget(const PhysicalParams& params, double a0) : p_(params), a0_(a0) {}

void EnergyBudget::start(const DiagnosticsRecord& r)
{
    dissipation_ = 0.0;
    rhs_ = 2.0 * r.kinetic_energy + 2.0 * p_.k * r.entropy_L;
    lhs_ = rhs_;
}

BudgetTerms EnergyBudget::add(const DiagnosticsRecord& r)
{
    dissipation_ += r.dt * (p_.nu * r.grad_u_sq + 2.0 * p_.k * p_.epsilon * r.fisher_x +
                            (a0_ * p_.k / p_.lambda) * r.fisher_q_L);
    rhs_ += (r.dt / p_.nu) * r.force_dual_sq;
    lhs_ = 2.0 * r.kinetic_energy + dissipation_ + 2.0 * p_.k * r.entropy_L;
    return {lhs_, rhs_};
}

BudgetAudit energy_budget_audit(const RunTrace& trace, double tolerance)
{
    EnergyBudget budget(trace.params, trace.a0);
    budget.start(trace.initial);
    BudgetAudit out;
    out.min_slack = std::numeric_limits<double>::infinity();
    for (const auto& r : trace.records) {
        budget.add(r);
        const double s = budget.slack();
        out.slack.push_back(s);
        out.min_slack = std::min(out.min_slack, s);
        if (s < -tolerance && out.first_violation < 0) out.first_violation = r.step;
    }
    if (trace.records.empty()) out.min_slack = budget.slack();
    return out;
}

double decay_fit(const std::vector<double>& t, const std::vector<double>& q)
{
    const double floor = 1e3 * std::numeric_limits<double>::epsilon();
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size() && i < q.size(); ++i) {
        if (!(q[i] > floor)) continue;
        const double y = std::log(q[i]);
        n += 1;
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
    }
    if (n < 2) fail(ErrorKind::InsufficientSignal, "decay_fit: decaying quantity is below the noise floor");
    const double den = n * stt - st * st;
    if (den <= 0.0) fail(ErrorKind::InsufficientSignal, "decay_fit: degenerate time window");
    return -(n * sty - st * sy) / den;
}

double decay_fit(const RunTrace& trace)
{
    std::vector<double> t, q;
    const double k = trace.params.k;
    auto push = [&](const DiagnosticsRecord& r) {
        t.push_back(r.t);
        q.push_back(2.0 * r.kinetic_energy + 2.0 * k * r.relative_entropy);
    };
    push(trace.initial);
    for (const auto& r : trace.records) push(r);
    return decay_fit(t, q);
}

double energy_bound_sq(double u0_sq, double force_integral, double nu, double k, double entropy0)
{
    return u0_sq + force_integral / nu + 2.0 * k * entropy0;
}

double moment_bound(const Discretization& disc, const PhysicalParams& params, double B_sq)
{
    const auto& mx = disc.maxwellian();
    const GrowthConstants g = growth_constants(mx.potential_spec());
    const double c_exp = (2.0 / g.c1) * disc.x().volume() * mx.exp_moment(g.c1);
    return B_sq / (params.k * g.c1) + c_exp;
}

MomentAudit moment_audit(const Discretization& disc, const ConfigurationDensity& psi, double bound)
{
    MomentAudit a;
    a.bound = bound;
    RealVector m(disc.nx());
    for (int i = 0; i < disc.springs(); ++i) {
        disc.q().theta_moment(i, psi.coeffs.data(), m.data(), disc.nx());
        const double v = disc.x().integral(m.data(), 1, 0);
        a.values.push_back(v);
        if (!(v <= bound)) a.pass = false;
    }
    return a;
}

} // namespace polykinetic
