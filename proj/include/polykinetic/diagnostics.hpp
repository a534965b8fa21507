#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polykinetic/discretization.hpp"
#include "polykinetic/functionals.hpp"

namespace polykinetic {

struct DiagnosticsRecord {
    int step = 0;
    double t = 0.0;
    double dt = 0.0;
    double kinetic_energy = 0.0;   // ||u||^2 / 2
    double grad_u_sq = 0.0;        // ||grad u||^2
    double relative_entropy = 0.0;
    double relative_entropy_k = 0.0;
    double entropy_L = 0.0;
    double fisher_x = 0.0;
    double fisher_q = 0.0;
    double fisher_q_L = 0.0;
    double free_energy = 0.0;
    double mass_min = 0.0;
    double mass_max = 0.0;
    double psi_min = 0.0;
    double psi_max = 0.0;
    double cutoff_active_fraction = 0.0;
    double energy_budget_slack = 0.0;
    double ck_gap = 0.0;
    double ls_gap = 0.0;
    double log_young_min = 0.0;
    double divergence = 0.0;
    double force_dual_sq = 0.0;    // ||f^n||^2_{V'} of the force used in this step
    std::vector<double> moment_theta;
    int outer_iterations = 0;
    int picard_iterations = 0;
};

struct RunTrace {
    std::string fingerprint;
    PhysicalParams params;
    double a0 = 0.0;
    double kappa = 1.0;
    double L = 0.0;
    DiagnosticsRecord initial;             // lifted data at t = 0
    std::vector<DiagnosticsRecord> records;  // steps 1..N
    State final_state;
    std::vector<VelocityField> velocity_history;  // u^0..u^N when requested
    std::vector<ConfigurationDensity> psi_history;
    double moment_bound = 0.0;
    bool moments_within_bound = true;
};

// Builds the record for a state; budget slack is filled by the caller.
DiagnosticsRecord measure(const Discretization& disc, const PhysicalParams& params, const State& state, double L,
                          double kappa);

double free_energy(const Discretization& disc, const PhysicalParams& params, const State& state);

double poincare_constant(const DomainSpec& domain);
double decay_rate_bound(const PhysicalParams& params, double a0, double kappa, const DomainSpec& domain);

// Left and right sides of the cumulative discrete energy inequality.
struct BudgetTerms {
    double lhs = 0.0;
    double rhs = 0.0;
};

// Running form: feed records in order; the first call must be the t = 0 record.
class EnergyBudget {
public:
    EnergyBudget(const PhysicalParams& params, double a0);
    void start(const DiagnosticsRecord& initial);
    BudgetTerms add(const DiagnosticsRecord& rec);
    double slack() const { return rhs_ - lhs_; }

private:
    PhysicalParams p_;
    double a0_;
    double dissipation_ = 0.0;
    double rhs_ = 0.0;
    double lhs_ = 0.0;
};

struct BudgetAudit {
    std::vector<double> slack;
    double min_slack = 0.0;
    int first_violation = -1;  // step index, -1 when none
};

BudgetAudit energy_budget_audit(const RunTrace& trace, double tolerance = 1e-9);

// Least-squares rate of log(||u||^2 + 2 k RE) over the trace (t = 0 record included).
double decay_fit(const RunTrace& trace);
double decay_fit(const std::vector<double>& t, const std::vector<double>& q);

// [B(u0, f, psi0)]^2 = ||u0||^2 + (1/nu) int ||f||^2_{V'} + 2 k int M F(psi0).
double energy_bound_sq(double u0_sq, double force_integral, double nu, double k, double entropy0);

struct MomentAudit {
    std::vector<double> values;  // per spring
    double bound = 0.0;
    bool pass = true;
};

double moment_bound(const Discretization& disc, const PhysicalParams& params, double B_sq);
MomentAudit moment_audit(const Discretization& disc, const ConfigurationDensity& psi, double bound);

} // namespace polykinetic
