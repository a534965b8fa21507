#include "polykinetic/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polykinetic/errors.hpp"
#include "polykinetic/kernels.hpp"

namespace polykinetic {

StressField kramers_stress(const Discretization& disc, const ConfigurationDensity& psi, double k)
{
    const std::size_t nx = disc.nx();
    const int d = disc.dim(), dd = d * d;
    StressField s;
    s.rho = disc.marginal(psi).values;
    s.tau.assign(nx * dd, 0.0);
    for (int i = 0; i < disc.springs(); ++i) {
        RealVector c(nx * dd);
        disc.q().kramers(i, psi.coeffs.data(), c.data(), nx);
        for (std::size_t j = 0; j < c.size(); ++j) s.tau[j] += k * c[j];
        s.C.push_back(std::move(c));
    }
    for (std::size_t x = 0; x < nx; ++x)
        for (int a = 0; a < d; ++a) s.tau[x * dd + a * d + a] -= k * s.rho[x];
    return s;
}

namespace {

// out = P dealias div(M) for a matrix field M (nx x d^2, M_ab at a*d+b): (div M)_a = sum_b d_b M_ab.
void projected_divergence(const TorusSpace& xs, const RealVector& M, double* out)
{
    const int d = xs.dim(), dd = d * d;
    const std::size_t nk = xs.spectral_size();
    ComplexVector spec(nk * dd), div(nk * d);
    xs.forward(M.data(), spec.data(), dd);
    for (std::size_t k = 0; k < nk; ++k)
        for (int a = 0; a < d; ++a) {
            cplx v = 0.0;
            if (xs.kept(k))
                for (int b = 0; b < d; ++b) v += cplx(0.0, xs.wavenumber(k, b)) * spec[k * dd + a * d + b];
            div[k * d + a] = v;
        }
    xs.leray_spectrum(div.data());
    xs.inverse(div.data(), out, d);
}

} // namespace

VelocityField ns_step(const Discretization& disc, const PhysicalParams& params, const VelocityField& u_prev,
                      const ConfigurationDensity& psi_curr, const VelocityField& f_curr, double dt, NsReport* report,
                      const VelocityField* guess)
{
    if (!(dt > 0.0)) fail(ErrorKind::InvalidParameter, "ns_step: dt must be > 0");
    const TorusSpace& xs = disc.x();
    const std::size_t nx = xs.size(), nk = xs.spectral_size();
    const int d = xs.dim();
    const std::size_t n = nx * d;

    RealVector b(u_prev.values);
    {
        RealVector f(f_curr.values);
        xs.leray(f.data());
        kernels::axpy(dt, {f.data(), n}, {b.data(), n});
    }
    if (params.k != 0.0) {
        const int dd = d * d;
        RealVector Csum(nx * dd, 0.0);
        for (int i = 0; i < disc.springs(); ++i) {
            RealVector c(nx * dd);
            disc.q().kramers(i, psi_curr.coeffs.data(), c.data(), nx);
            kernels::axpy(1.0, {c.data(), c.size()}, {Csum.data(), Csum.size()});
        }
        RealVector div(n);
        projected_divergence(xs, Csum, div.data());
        kernels::axpy(dt * params.k, {div.data(), n}, {b.data(), n});
    }
    xs.leray(b.data());

    const bool convect = std::any_of(u_prev.values.begin(), u_prev.values.end(), [](double v) { return v != 0.0; });
    ComplexVector spec(nk * d), work(nk * d);
    RealVector grad(nx * d * d), conv(n);
    const double nu = params.nu;
    const LinearOperator A = [&](const double* in, double* out) {
        xs.forward(in, spec.data(), d);
        if (convect) {
            xs.gradient(in, grad.data(), d);
            for (std::size_t x = 0; x < nx; ++x)
                for (int j = 0; j < d; ++j) {
                    double s = 0.0;
                    for (int a = 0; a < d; ++a) s += u_prev.values[x * d + a] * grad[(x * d + j) * d + a];
                    conv[x * d + j] = s;
                }
            xs.forward(conv.data(), work.data(), d);
        } else {
            std::fill(work.begin(), work.end(), cplx(0.0));
        }
        for (std::size_t k = 0; k < nk; ++k)
            for (int j = 0; j < d; ++j) work[k * d + j] = dt * (work[k * d + j] + nu * xs.k2(k) * spec[k * d + j]) + spec[k * d + j];
        xs.leray_spectrum(work.data());
        xs.inverse(work.data(), out, d);
    };
    const LinearOperator P = [&](const double* in, double* out) {
        xs.forward(in, spec.data(), d);
        for (std::size_t k = 0; k < nk; ++k)
            for (int j = 0; j < d; ++j) spec[k * d + j] /= 1.0 + dt * nu * xs.k2(k);
        xs.leray_spectrum(spec.data());
        xs.inverse(spec.data(), out, d);
    };

    VelocityField u{guess ? guess->values : u_prev.values};
    xs.leray(u.values.data());
    const KrylovReport kr = gmres(n, A, P, b.data(), u.values.data());
    if (!kr.converged) fail(ErrorKind::Solver, "ns_step: Krylov solve did not converge");
    xs.leray(u.values.data());
    if (report) {
        report->krylov_iterations = kr.iterations;
        report->divergence = xs.divergence_norm(u.values.data());
    }
    return u;
}

VelocityField lift_initial_velocity(const Discretization& disc, const VelocityField& u0, double dt)
{
    const TorusSpace& xs = disc.x();
    const int d = xs.dim();
    ComplexVector spec(xs.spectral_size() * d);
    xs.forward(u0.values.data(), spec.data(), d);
    xs.leray_spectrum(spec.data());
    for (std::size_t k = 0; k < xs.spectral_size(); ++k)
        for (int j = 0; j < d; ++j) spec[k * d + j] /= 1.0 + dt * xs.k2(k);
    VelocityField u{RealVector(xs.size() * d)};
    xs.inverse(spec.data(), u.values.data(), d);
    return u;
}

namespace {

double profile(const ForceSpec& spec, double t)
{
    switch (spec.profile) {
    case ForceTimeProfile::Constant: return 1.0;
    case ForceTimeProfile::Linear: return t;
    case ForceTimeProfile::Cosine: return std::cos(spec.omega * t);
    }
    return 1.0;
}

std::array<double, 3> force_direction(const ForceSpec& spec, int d)
{
    const auto& m = spec.mode;
    std::array<double, 3> e{0.0, 0.0, 0.0};
    if (d == 2) {
        e = {static_cast<double>(m[1]), -static_cast<double>(m[0]), 0.0};
    } else {
        // m x e_z, or m x e_x when m is parallel to e_z
        if (m[0] != 0 || m[1] != 0) e = {static_cast<double>(m[1]), -static_cast<double>(m[0]), 0.0};
        else e = {0.0, static_cast<double>(m[2]), -static_cast<double>(m[1])};
    }
    const double nrm = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (nrm == 0.0) fail(ErrorKind::InvalidParameter, "force mode must be nonzero");
    for (auto& v : e) v /= nrm;
    return e;
}

} // namespace

VelocityField evaluate_force(const Discretization& disc, const ForceSpec& spec, double t)
{
    const TorusSpace& xs = disc.x();
    const int d = xs.dim();
    VelocityField f{RealVector(xs.size() * d, 0.0)};
    if (spec.kind == ForceKind::Zero || spec.amplitude == 0.0) return f;
    const auto e = force_direction(spec, d);
    const double g = spec.amplitude * profile(spec, t);
    for (std::size_t x = 0; x < xs.size(); ++x) {
        const auto c = xs.coordinate(x);
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += spec.mode[a] * c[a];
        const double s = g * std::sin(2.0 * std::numbers::pi * phase / xs.side());
        for (int a = 0; a < d; ++a) f.values[x * d + a] = s * e[a];
    }
    return f;
}

VelocityField average_force(const Discretization& disc, const ForceSpec& spec, int n, double dt)
{
    const TorusSpace& xs = disc.x();
    VelocityField f{RealVector(xs.size() * xs.dim(), 0.0)};
    if (spec.kind == ForceKind::Zero || spec.amplitude == 0.0) return f;
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    const double t0 = (n - 1) * dt;
    for (int j = 0; j < 4; ++j) {
        const VelocityField fj = evaluate_force(disc, spec, t0 + 0.5 * dt * (gx[j] + 1.0));
        kernels::axpy(0.5 * gw[j], {fj.values.data(), fj.values.size()}, {f.values.data(), f.values.size()});
    }
    xs.leray(f.values.data());
    return f;
}

} // namespace polykinetic
