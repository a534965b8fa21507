// Acceptance runner: prints one PASS/FAIL line per criterion and exits nonzero if any line fails.
// Usage: polykinetic_acceptance [all | 1 .. 11]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include "polykinetic/config.hpp"
#include "polykinetic/coupled_stepper.hpp"
#include "polykinetic/diagnostics.hpp"
#include "polykinetic/fp_solver.hpp"
#include "polykinetic/functionals.hpp"
#include "polykinetic/initial_data.hpp"
#include "polykinetic/scenarios.hpp"
#include "polykinetic/selftest.hpp"

using namespace polykinetic;

namespace {

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail)
{
    std::printf("%s criterion %-9s %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct Run {
    RunConfig cfg;
    RunSetup setup;
    std::unique_ptr<Discretization> disc;
    RunTrace trace;
    double seconds = 0.0;
};

Run execute(const RunConfig& cfg, const std::function<void(RunSetup&)>& tweak = {})
{
    Run r;
    r.cfg = cfg;
    r.setup = make_setup(cfg);
    if (tweak) tweak(r.setup);
    r.disc = build_spaces(r.setup.params, r.setup.chain, r.setup.resolution, r.setup.domain);
    const auto t0 = std::chrono::steady_clock::now();
    r.trace = run(r.setup, *r.disc);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    spdlog::info("{}: {} steps in {:.1f} s", cfg.name, r.trace.records.size(), r.seconds);
    return r;
}

std::map<std::string, std::unique_ptr<Run>> g_cache;

const Run& scenario(const std::string& name)
{
    auto it = g_cache.find(name);
    if (it == g_cache.end()) it = g_cache.emplace(name, std::make_unique<Run>(execute(scenario_config(name)))).first;
    return *it->second;
}

// The runs that criteria 3 and 6 sweep over.
const std::vector<std::string> kAcceptanceRuns = {"equilibrium", "decay-demo", "forced", "ou-oracle", "dumbbell-k2"};

double psi_l2m_sq(const Discretization& disc, const ConfigurationDensity& a, const ConfigurationDensity* b = nullptr)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        const double v = a.coeffs[i] - (b ? b->coeffs[i] : 0.0);
        acc += v * v;
    }
    return acc * disc.x().volume() / static_cast<double>(disc.nx());
}

double u_l2_sq(const Discretization& disc, const VelocityField& a, const VelocityField& b)
{
    RealVector d(a.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
    return disc.x().l2_norm_sq(d.data(), disc.dim());
}

double state_distance(const Discretization& disc, const State& a, const State& b)
{
    return std::sqrt(u_l2_sq(disc, a.u, b.u) + psi_l2m_sq(disc, a.psi, &b.psi));
}

// ---------------------------------------------------------------------------------------------

void criterion_1()
{
    const Run& r = scenario("equilibrium");
    const DiagnosticsRecord& o = r.trace.initial;
    double worst = 0.0;
    for (const auto& rec : r.trace.records) {
        const double diffs[] = {rec.kinetic_energy - o.kinetic_energy,     rec.grad_u_sq - o.grad_u_sq,
                                rec.relative_entropy - o.relative_entropy, rec.entropy_L - o.entropy_L,
                                rec.fisher_x - o.fisher_x,                 rec.fisher_q - o.fisher_q,
                                rec.fisher_q_L - o.fisher_q_L,             rec.free_energy - o.free_energy,
                                rec.mass_min - o.mass_min,                 rec.mass_max - o.mass_max,
                                rec.psi_min - o.psi_min,                   rec.psi_max - o.psi_max,
                                rec.cutoff_active_fraction - o.cutoff_active_fraction,
                                rec.energy_budget_slack - o.energy_budget_slack,
                                rec.ck_gap - o.ck_gap,                     rec.ls_gap - o.ls_gap,
                                rec.divergence - o.divergence};
        for (double d : diffs) worst = std::max(worst, std::abs(d));
    }
    const bool pass = r.trace.records.size() == 100 && worst <= 1e-12;
    report("1", pass, fmt("equilibrium, %g steps: max diagnostic change %.3e (tol 1e-12)",
                          static_cast<double>(r.trace.records.size()), worst));
}

// Dense Galerkin oracle for the q-operator (1 / 2 lambda) A11 grad . (M grad) on total-degree-<=P polynomials in
// 2D, assembled on a Cartesian Gauss-Hermite rule in the monomial basis.
struct OuOracle {
    int P = 0;
    std::vector<std::array<int, 2>> mono;
    std::vector<std::array<double, 2>> nodes;
    std::vector<double> weights;
    Eigen::MatrixXd G, V;  // Gram matrix, G-orthonormal eigenvectors
    Eigen::VectorXd mu;

    OuOracle(int degree, double A11, double lambda) : P(degree)
    {
        for (int n = 0; n <= P; ++n)
            for (int a = n; a >= 0; --a) mono.push_back({a, n - a});
        const int m = P + 3;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
        for (int i = 1; i < m; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gw(J);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                nodes.push_back({gw.eigenvalues()(i), gw.eigenvalues()(j)});
                weights.push_back(std::pow(gw.eigenvectors()(0, i), 2) * std::pow(gw.eigenvectors()(0, j), 2));
            }
        const int nb = static_cast<int>(mono.size());
        G = Eigen::MatrixXd::Zero(nb, nb);
        Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nb, nb);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            Eigen::VectorXd v(nb), g1(nb), g2(nb);
            for (int b = 0; b < nb; ++b) {
                const auto [a1, a2] = mono[b];
                const double x = nodes[k][0], y = nodes[k][1];
                v(b) = std::pow(x, a1) * std::pow(y, a2);
                g1(b) = a1 ? a1 * std::pow(x, a1 - 1) * std::pow(y, a2) : 0.0;
                g2(b) = a2 ? a2 * std::pow(x, a1) * std::pow(y, a2 - 1) : 0.0;
            }
            G += weights[k] * v * v.transpose();
            S += weights[k] * (g1 * g1.transpose() + g2 * g2.transpose());
        }
        S *= A11 / (2.0 * lambda);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, G);
        mu = es.eigenvalues();
        V = es.eigenvectors();
    }

    // Monomial coefficients of a q-function sampled at the oracle nodes (exact for degree <= P).
    Eigen::VectorXd fit(const std::function<double(const std::array<double, 2>&)>& g) const
    {
        const int nb = static_cast<int>(mono.size());
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double val = g(nodes[k]);
            for (int b = 0; b < nb; ++b)
                rhs(b) += weights[k] * val * std::pow(nodes[k][0], mono[b][0]) * std::pow(nodes[k][1], mono[b][1]);
        }
        return G.ldlt().solve(rhs);
    }

    // Eigenvalues clustered to the nearest integer multiple of the smallest positive eigenvalue.
    std::vector<int> levels() const
    {
        double base = 0.0;
        for (int i = 0; i < mu.size(); ++i)
            if (mu(i) > 1e-8) {
                base = mu(i);
                break;
            }
        std::vector<int> lv(mu.size());
        for (int i = 0; i < mu.size(); ++i) lv[i] = static_cast<int>(std::lround(mu(i) / base));
        return lv;
    }

    // Norm of the component of c in the eigenspace of level n.
    double amplitude(const Eigen::VectorXd& c, int n) const
    {
        const auto lv = levels();
        const Eigen::VectorXd modal = V.transpose() * G * c;
        double s = 0.0;
        for (int i = 0; i < modal.size(); ++i)
            if (lv[i] == n) s += modal(i) * modal(i);
        return std::sqrt(s);
    }

    double level_eigenvalue(int n) const
    {
        const auto lv = levels();
        for (int i = 0; i < mu.size(); ++i)
            if (lv[i] == n) return mu(i);
        return 0.0;
    }
};

void criterion_2()
{
    // u = 0, K = 1, lambda = 1, Hookean potential on the resolved region; x-constant data with degree 1..3 modes.
    PhysicalParams params;
    params.K = 1;
    params.d = 2;
    params.lambda = 1.0;
    params.epsilon = 0.1;
    PotentialSpec pot;
    pot.s_inf = 60.0;
    const ChainSpec chain = make_chain(1, pot);
    const int P = 6;
    const auto disc = build_spaces(params, chain, Resolution{8, P, 0, 0});
    const QSpace& q = disc->q();
    const double dt = 0.05, L = 10.0, a = 0.05;
    const int steps = 10;

    ConfigurationDensity psi = disc->constant_density(1.0);
    const std::array<std::array<int, 3>, 3> exps = {{{1, 0, 0}, {1, 1, 0}, {0, 3, 0}}};
    for (std::size_t x = 0; x < disc->nx(); ++x)
        for (const auto& e : exps) psi.coeffs[x * disc->nq() + q.index_of(e)] += a;

    const OuOracle oracle(P, 2.0, params.lambda);
    auto coefficients = [&](const ConfigurationDensity& p) {
        std::vector<double> row(p.coeffs.begin(), p.coeffs.begin() + disc->nq());
        std::vector<double> vals(disc->nq());
        return oracle.fit([&](const std::array<double, 2>& node) {
            q.evaluate(std::span<const double>(node.data(), 2), vals.data());
            double s = 0.0;
            for (std::size_t l = 0; l < row.size(); ++l) s += row[l] * vals[l];
            return s;
        });
    };

    const VelocityField u0 = disc->zero_velocity();
    double worst_literal = 0.0, worst_oracle = 0.0, worst_rouse = 0.0;
    Eigen::VectorXd c_prev = coefficients(psi);
    for (int s = 0; s < steps; ++s) {
        psi = fp_step(*disc, params, psi, u0, u0, dt, L);
        const Eigen::VectorXd c = coefficients(psi);
        for (int n = 1; n <= 3; ++n) {
            const double prev = oracle.amplitude(c_prev, n), now = oracle.amplitude(c, n);
            worst_literal = std::max(worst_literal, std::abs(now - prev / (1.0 + n * dt / (2.0 * params.lambda))));
            worst_oracle = std::max(worst_oracle, std::abs(now - prev / (1.0 + dt * oracle.level_eigenvalue(n))));
            worst_rouse = std::max(worst_rouse, std::abs(now - prev / (1.0 + n * dt / params.lambda)));
        }
        c_prev = c;
    }
    report("2", worst_literal <= 1e-8,
           fmt("literal factor 1/(1+n dt/(2 lambda)), n=1..3, %g steps: max error %.3e (tol 1e-8)", steps,
               worst_literal));
    report("2-oracle", worst_oracle <= 1e-8,
           fmt("dense Gauss-Hermite eigensolve oracle (mu_1 = %.12g): max error %.3e (tol 1e-8); "
               "against 1/(1+n dt/lambda): %.3e",
               oracle.level_eigenvalue(1), worst_oracle, worst_rouse));
}

void criterion_3()
{
    double worst = 0.0;
    std::string where;
    for (const auto& name : kAcceptanceRuns) {
        const Run& r = scenario(name);
        auto check = [&](const DiagnosticsRecord& rec) {
            const double e = std::max(std::abs(rec.mass_min - 1.0), std::abs(rec.mass_max - 1.0));
            if (e > worst || where.empty()) {
                worst = std::max(worst, e);
                where = name;
            }
        };
        check(r.trace.initial);
        for (const auto& rec : r.trace.records) check(rec);
    }
    report("3", worst <= 1e-8,
           fmt("max |int M psi dq - 1| over x-nodes, steps and %g runs: %.3e (tol 1e-8)",
               static_cast<double>(kAcceptanceRuns.size()), worst));
}

void criterion_4()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"decay-demo", "forced"}) {
        const Run& r = scenario(name);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& rec : r.trace.records) worst = std::min(worst, rec.energy_budget_slack);
        const BudgetAudit audit = energy_budget_audit(r.trace, 1e-9);
        ok = ok && worst >= -1e-9 && audit.first_violation < 0;
        detail += std::string(name) + fmt(": min slack %.3e; ", worst);
    }
    report("4", ok, detail + "(tol -1e-9)");
}

void criterion_5()
{
    const Run& r = scenario("decay-demo");
    const double gamma0 = decay_rate_bound(r.setup.params, r.setup.chain.a0, r.trace.kappa, r.setup.domain);
    const double rate = decay_fit(r.trace);
    report("5", rate >= 0.95 * gamma0 && r.trace.kappa >= 1.0,
           fmt("fitted rate of ||u||^2 + 2k RE on [0,2]: %.4f, gamma0 = %.4f, kappa = %.3f (need rate >= 0.95 gamma0)",
               rate, gamma0, r.trace.kappa));
}

void criterion_6()
{
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& name : kAcceptanceRuns) {
        const Run& r = scenario(name);
        worst = std::min(worst, r.trace.initial.ck_gap);
        for (const auto& rec : r.trace.records) worst = std::min(worst, rec.ck_gap);
    }
    report("6", worst >= -1e-9,
           fmt("min ck_gap over %g runs: %.3e (tol -1e-9)", static_cast<double>(kAcceptanceRuns.size()), worst));
}

void criterion_7()
{
    RunConfig base = scenario_config("decay-demo");
    base.name = "cutoff-L";
    base.physics.T = 1.0;
    base.L = 12.0;
    const Run a = execute(base);
    RunConfig doubled = base;
    doubled.name = "cutoff-2L";
    doubled.L = 2.0 * base.L;
    doubled.steps = a.setup.schedule.N;  // same dt as the L run
    const Run b = execute(doubled);

    const double sup0 = a.trace.initial.psi_max;
    const double du = std::sqrt(u_l2_sq(*a.disc, a.trace.final_state.u, b.trace.final_state.u));
    const double dpsi = std::sqrt(psi_l2m_sq(*a.disc, a.trace.final_state.psi, &b.trace.final_state.psi));
    const bool same_dt = std::abs(a.setup.schedule.dt - b.setup.schedule.dt) == 0.0;
    report("7", same_dt && sup0 < base.L / 2 && du <= 1e-8 && dpsi <= 1e-8,
           fmt("L = 12 vs 24, dt = %.5g, sup psi0 = %.3f (< L/2): ", a.setup.schedule.dt, sup0) +
               fmt("||du||_L2 = %.3e, ||dpsi||_L2M = %.3e (tol 1e-8)", du, dpsi));
}

void criterion_8()
{
    double worst = 0.0;
    for (int K : {1, 2})
        for (int P : {4, 8})
            if (K == 1 || P == 4) worst = std::max(worst, ibp_worst_residual(P, K, 20, 2024u + K));
    bool selftest_ok = false;
    for (const auto& c : run_selftest())
        if (c.name.rfind("ibp", 0) == 0) selftest_ok = c.pass;
    report("8", selftest_ok && worst <= 1e-10,
           fmt("Kramers duality, 20 random trace-free B, every basis function: worst residual %.3e (tol 1e-10)",
               worst));
}

void criterion_9()
{
    RunConfig cfg = scenario_config("decay-demo");
    cfg.name = "marginal";
    cfg.physics.T = 1.0;
    const double depth = 0.4;
    const Run r = execute(cfg, [&](RunSetup& s) {
        s.keep_velocity_history = true;
        s.keep_psi_history = true;
        auto base = s.initial;
        // non-uniform marginal: scale every q-row by zeta0(x) = 1 - depth (1 + cos 2 pi x1) / 2
        s.initial = [base, depth](const Discretization& disc) {
            InitialData d = base(disc);
            const std::size_t nq = disc.nq();
            for (std::size_t x = 0; x < disc.nx(); ++x) {
                const double z = 1.0 - depth * 0.5 * (1.0 + std::cos(2.0 * M_PI * disc.x().coordinate(x)[0]));
                for (std::size_t l = 0; l < nq; ++l) d.psi0.coeffs[x * nq + l] *= z;
            }
            return d;
        };
    });
    const Discretization& disc = *r.disc;
    const double dt = r.setup.schedule.dt;
    MarginalDensity zeta = marginal(disc, r.trace.psi_history.front());
    for (std::size_t n = 1; n < r.trace.velocity_history.size(); ++n)
        zeta = marginal_step(disc, r.setup.params.epsilon, zeta, r.trace.velocity_history[n - 1], dt);
    const MarginalDensity coupled = marginal(disc, r.trace.final_state.psi);
    RealVector diff(zeta.values.size());
    double spread = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = coupled.values[i] - zeta.values[i];
        spread = std::max(spread, std::abs(coupled.values[i] - 1.0));
    }
    const double err = std::sqrt(disc.x().l2_norm_sq(diff.data(), 1));
    report("9", err <= 1e-6 && std::abs(r.trace.final_state.t - 1.0) < 1e-12,
           fmt("T = 1, %g steps: ||zeta_coupled - zeta_direct||_L2 = %.3e (tol 1e-6); max |zeta - 1| = %.3f",
               static_cast<double>(r.trace.records.size()), err, spread));
}

void criterion_10()
{
    const RunConfig cfg = scenario_config("decay-demo");
    const RunSetup setup = make_setup(cfg);
    const auto disc = build_spaces(setup.params, setup.chain, setup.resolution, setup.domain);
    const double dt = setup.schedule.dt, L = setup.schedule.L;
    double worst2 = -std::numeric_limits<double>::infinity(), worst3 = worst2;
    for (std::uint64_t seed : {11u, 23u, 47u}) {
        const ConfigurationDensity psi0 = random_density(*disc, 0.6, seed);
        const ConfigurationDensity lifted = lift_initial_density(*disc, psi0, dt, L);
        const FunctionalValues before = evaluate_functionals(*disc, psi0);
        const FunctionalValues after = evaluate_functionals(*disc, lifted);
        worst2 = std::max(worst2, after.relative_entropy - before.relative_entropy);
        worst3 = std::max(worst3, dt * (after.fisher_x + after.fisher_q) - before.relative_entropy);
    }
    report("10", worst2 <= 1e-9 && worst3 <= 1e-9,
           fmt("3 random fixtures, dt = %.4g: max [F(lifted) - F(psi0)] = %.3e; "
               "max [dt (I_x + I_q)(lifted) - F(psi0)] = %.3e (tol 1e-9)",
               dt, worst2, worst3));
}

void criterion_11()
{
    RunConfig cfg = scenario_config("decay-demo");
    cfg.physics.T = 0.5;
    const int N0 = 8;
    std::vector<Run> runs;
    for (int j = 0; j < 4; ++j) {
        RunConfig c = cfg;
        c.name = "refine-" + std::to_string(N0 << j);
        c.steps = N0 << j;
        runs.push_back(execute(c));
    }
    std::vector<double> e;
    for (int j = 0; j + 1 < 4; ++j) e.push_back(state_distance(*runs[j].disc, runs[j].trace.final_state,
                                                               runs[j + 1].trace.final_state));
    const double p1 = std::log2(e[0] / e[1]), p2 = std::log2(e[1] / e[2]);
    report("11", std::min(p1, p2) >= 0.9,
           fmt("N = 8,16,32,64 at fixed L: successive differences %.3e, %.3e, %.3e; ", e[0], e[1], e[2]) +
               fmt("observed orders %.3f, %.3f (need >= 0.9)", p1, p2));
}

} // namespace

int main(int argc, char** argv)
{
    spdlog::set_level(std::getenv("POLYKINETIC_VERBOSE") ? spdlog::level::info : spdlog::level::warn);
    const std::map<std::string, std::function<void()>> criteria = {
        {"1", criterion_1}, {"2", criterion_2}, {"3", criterion_3}, {"4", criterion_4},
        {"5", criterion_5}, {"6", criterion_6}, {"7", criterion_7}, {"8", criterion_8},
        {"9", criterion_9}, {"10", criterion_10}, {"11", criterion_11}};
    std::vector<std::string> wanted(argv + 1, argv + argc);
    if (wanted.empty() || wanted.front() == "all")
        wanted = {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"};
    for (const auto& id : wanted) {
        auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::fprintf(stderr, "unknown criterion '%s'\n", id.c_str());
            return 2;
        }
        try {
            it->second();
        } catch (const std::exception& e) {
            report(id, false, std::string("raised: ") + e.what());
        }
    }
    return g_failures == 0 ? 0 : 1;
}
