#include "polykinetic/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "polykinetic/checkpoint.hpp"
#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase(const TorusSpace& xs, std::size_t x, const std::array<int, 3>& k)
{
    const auto c = xs.coordinate(x);
    double s = 0.0;
    for (int a = 0; a < xs.dim(); ++a) s += k[a] * c[a];
    return kTwoPi * s / xs.side();
}

struct StretchTerm {
    double amplitude;
    std::array<int, 3> xmode;
    double offset;  // x-phase
    std::array<double, 3> v;
};

ConfigurationDensity stretched_sum(const Discretization& disc, const std::vector<StretchTerm>& terms)
{
    const QSpace& q = disc.q();
    const auto& rule = q.rule();
    const std::size_t nx = disc.nx(), nodes = q.total_nodes(), nn = q.spring_nodes();
    const int K = disc.springs(), d = disc.dim();

    // per term, per spring node: ((v.q)^2 - E) / E
    std::vector<std::vector<double>> shape(terms.size(), std::vector<double>(nn));
    for (std::size_t t = 0; t < terms.size(); ++t) {
        double mean = 0.0;
        for (std::size_t j = 0; j < nn; ++j) {
            const double* p = rule.point(j);
            double vq = 0.0;
            for (int a = 0; a < d; ++a) vq += terms[t].v[a] * p[a];
            shape[t][j] = vq * vq;
            mean += rule.weights[j] * vq * vq;
        }
        for (auto& s : shape[t]) s = (s - mean) / mean;
    }

    RealVector nodal(nx * nodes);
    for (std::size_t x = 0; x < nx; ++x) {
        std::vector<double> g(terms.size());
        for (std::size_t t = 0; t < terms.size(); ++t)
            g[t] = terms[t].amplitude * 0.5 * (1.0 + std::cos(phase(disc.x(), x, terms[t].xmode) + terms[t].offset));
        for (std::size_t n = 0; n < nodes; ++n) {
            const auto idx = q.node_multi_index(n);
            double v = 1.0;
            for (std::size_t t = 0; t < terms.size(); ++t) {
                double s = 0.0;
                for (int i = 0; i < K; ++i) s += shape[t][idx[i]];
                v += g[t] * s / K;
            }
            nodal[x * nodes + n] = v;
        }
    }
    ConfigurationDensity out{RealVector(nx * disc.nq())};
    q.project_nodes(nodal.data(), out.coeffs.data(), nx, false);
    // exact marginal: the projection of 1 + zero-mean terms has coefficient 0 equal to 1 up to rounding
    for (std::size_t x = 0; x < nx; ++x) out.coeffs[x * disc.nq()] = 1.0;
    return out;
}

} // namespace

VelocityField make_velocity(const Discretization& disc, VelocityPreset preset, double amplitude)
{
    const TorusSpace& xs = disc.x();
    const int d = xs.dim();
    VelocityField u{RealVector(xs.size() * d, 0.0)};
    if (preset == VelocityPreset::Zero || amplitude == 0.0) return u;
    for (std::size_t x = 0; x < xs.size(); ++x) {
        const auto c = xs.coordinate(x);
        const double X = kTwoPi * c[0] / xs.side(), Y = kTwoPi * c[1] / xs.side();
        if (preset == VelocityPreset::TaylorGreen) {
            u.values[x * d] = amplitude * std::sin(X) * std::cos(Y);
            u.values[x * d + 1] = -amplitude * std::cos(X) * std::sin(Y);
        } else {
            u.values[x * d] = amplitude * std::sin(Y);
        }
    }
    return u;
}

ConfigurationDensity perturbed_mode(const Discretization& disc, double amplitude, std::array<int, 3> xmode,
                                    std::array<int, 3> qexps)
{
    const QSpace& q = disc.q();
    const int l = q.index_of(qexps);
    if (l <= 0) fail(ErrorKind::Config, "perturbed-mode: q-mode must be a non-constant basis function of the space");
    std::vector<int> per(disc.springs(), 0);
    per[0] = l;
    const std::size_t flat = q.flat_index(per);
    ConfigurationDensity p = disc.constant_density(1.0);
    for (std::size_t x = 0; x < disc.nx(); ++x)
        p.coeffs[x * disc.nq() + flat] = amplitude * std::cos(phase(disc.x(), x, xmode));
    return p;
}

ConfigurationDensity stretched(const Discretization& disc, double amplitude, std::array<int, 3> xmode, double angle)
{
    if (!(amplitude >= 0.0 && amplitude < 1.0)) fail(ErrorKind::Config, "stretched density: amplitude must be in [0, 1)");
    return stretched_sum(disc, {{amplitude, xmode, 0.0, {std::cos(angle), std::sin(angle), 0.0}}});
}

ConfigurationDensity random_density(const Discretization& disc, double amplitude, std::uint64_t seed)
{
    if (!(amplitude >= 0.0 && amplitude < 1.0)) fail(ErrorKind::Config, "random density: amplitude must be in [0, 1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> mode(-2, 2);
    std::vector<StretchTerm> terms(3);
    std::vector<double> share(3);
    double total = 0.0;
    for (auto& s : share) total += (s = 0.2 + unit(rng));
    for (std::size_t t = 0; t < terms.size(); ++t) {
        auto& term = terms[t];
        term.amplitude = amplitude * share[t] / total;
        term.xmode = {mode(rng), mode(rng), disc.dim() == 3 ? mode(rng) : 0};
        term.offset = kTwoPi * unit(rng);
        double v[3] = {unit(rng) - 0.5, unit(rng) - 0.5, disc.dim() == 3 ? unit(rng) - 0.5 : 0.0};
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        term.v = {v[0] / n, v[1] / n, v[2] / n};
    }
    return stretched_sum(disc, terms);
}

ConfigurationDensity make_density(const Discretization& disc, const InitialSpec& spec)
{
    switch (spec.density) {
    case DensityPreset::Equilibrium: return disc.constant_density(1.0);
    case DensityPreset::PerturbedMode:
        return perturbed_mode(disc, spec.density_amplitude, spec.density_xmode, spec.density_qmode);
    case DensityPreset::Stretched:
        return stretched(disc, spec.density_amplitude, spec.density_xmode, spec.density_angle);
    case DensityPreset::Random: return random_density(disc, spec.density_amplitude, spec.seed);
    case DensityPreset::File: {
        const Checkpoint c = read_checkpoint(spec.density_file);
        if (c.state.psi.coeffs.size() != disc.nx() * disc.nq())
            fail(ErrorKind::Config, "density file resolution does not match the configured spaces");
        return c.state.psi;
    }
    }
    fail(ErrorKind::Config, "unknown density preset");
}

} // namespace polykinetic
