#include "polykinetic/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polykinetic/entropy.hpp"
#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

// Below this a nodal value is treated as zero in the Fisher integrands.
constexpr double kFisherFloor = 1e-14;

void check_negativity(const FunctionalValues& v, const Discretization& disc, double tol, const char* who)
{
    if (v.psi_min >= -tol) return;
    const auto xc = disc.x().coordinate(v.min_x);
    std::ostringstream msg;
    msg << who << ": psi_hat = " << v.psi_min << " < -" << tol << " at x = (" << xc[0] << ", " << xc[1];
    if (disc.dim() == 3) msg << ", " << xc[2];
    msg << "), q-node " << v.min_node;
    fail(ErrorKind::Negativity, msg.str());
}

} // namespace

FunctionalValues evaluate_functionals(const Discretization& disc, const ConfigurationDensity& psi, double L)
{
    const QSpace& q = disc.q();
    const std::size_t nodes = q.total_nodes(), nq = q.size();
    const int ncomp = disc.springs() * disc.dim();
    const int d = disc.dim();
    const double dx = disc.x().volume() / static_cast<double>(disc.nx());
    std::vector<double> w(nodes);
    for (std::size_t n = 0; n < nodes; ++n) w[n] = q.node_weight(n);

    FunctionalValues v;
    v.mass_min = std::numeric_limits<double>::infinity();
    v.mass_max = -std::numeric_limits<double>::infinity();
    double cut = 0.0;
    disc.sweep(psi, {true, true}, [&](const NodalBlock& b) {
        for (std::size_t xi = 0; xi < b.count; ++xi) {
            const std::size_t x = b.x0 + xi;
            const double zeta = psi.coeffs[x * nq];
            v.mass_min = std::min(v.mass_min, zeta);
            v.mass_max = std::max(v.mass_max, zeta);
            double re = 0, reL = 0, fx = 0, fq = 0, fqL = 0, l1 = 0, ce = 0, c = 0;
            const double* val = b.values + xi * nodes;
            for (std::size_t n = 0; n < nodes; ++n) {
                const double s = val[n];
                if (s < v.psi_min) {
                    v.psi_min = s;
                    v.min_x = x;
                    v.min_node = n;
                }
                v.psi_max = std::max(v.psi_max, s);
                const double sp = std::max(s, 0.0);
                re += w[n] * entropy_F(sp);
                reL += w[n] * entropy_family(sp, L, 0);
                l1 += w[n] * std::abs(s - 1.0);
                if (sp > 0.0 && zeta > 0.0) ce += w[n] * sp * std::log(sp / zeta);
                if (s >= L) c += w[n];
                if (s > kFisherFloor) {
                    double gx = 0, gq = 0;
                    for (int a = 0; a < d; ++a) {
                        const double g = b.grad_x[(a * b.count + xi) * nodes + n];
                        gx += g * g;
                    }
                    for (int j = 0; j < ncomp; ++j) {
                        const double g = b.grad_q[(j * b.count + xi) * nodes + n];
                        gq += g * g;
                    }
                    fx += w[n] * gx / s;
                    fq += w[n] * gq / s;
                    fqL += w[n] * gq / std::min(s, L);
                }
            }
            v.relative_entropy += dx * re;
            v.entropy_L += dx * reL;
            v.fisher_x += dx * fx;
            v.fisher_q += dx * fq;
            v.fisher_q_L += dx * fqL;
            v.l1_deviation += dx * l1;
            v.conditional_entropy += dx * ce;
            cut += dx * c;
        }
    });
    v.cutoff_fraction = cut / disc.x().volume();
    return v;
}

double relative_entropy(const Discretization& disc, const ConfigurationDensity& psi, double negativity_tol)
{
    const FunctionalValues v = evaluate_functionals(disc, psi);
    check_negativity(v, disc, negativity_tol, "relative_entropy");
    return v.relative_entropy;
}

double fisher_information(const Discretization& disc, const ConfigurationDensity& psi, Direction direction,
                          double negativity_tol)
{
    const FunctionalValues v = evaluate_functionals(disc, psi);
    check_negativity(v, disc, negativity_tol, "fisher_information");
    return direction == Direction::X ? v.fisher_x : v.fisher_q;
}

double log_young_samples()
{
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 40; ++i) {
        const double r = 0.125 * i;
        for (int j = -40; j <= 40; ++j) m = std::min(m, log_young_residual(r, 0.125 * j));
    }
    return m;
}

InequalityAudit inequality_audits(const FunctionalValues& v, double volume, double kappa)
{
    InequalityAudit a;
    a.csiszar_kullback_gap = 2.0 * volume * v.relative_entropy - v.l1_deviation * v.l1_deviation;
    // (2/kappa) int |grad sqrt psi|^2 dnu = I / (2 kappa)
    a.log_sobolev_gap = v.fisher_q / (2.0 * kappa) - v.conditional_entropy;
    a.log_young_min = log_young_samples();
    return a;
}

InequalityAudit inequality_audits(const Discretization& disc, const ConfigurationDensity& psi, double kappa)
{
    return inequality_audits(evaluate_functionals(disc, psi), disc.x().volume(), kappa);
}

} // namespace polykinetic
