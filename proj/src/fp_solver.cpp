#include "polykinetic/fp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "polykinetic/errors.hpp"
#include "polykinetic/kernels.hpp"

namespace polykinetic {

namespace {

// Multiplies the spectrum of every component by f(kidx) and zeroes the unresolved modes.
template <class F>
void spectral_scale(const TorusSpace& xs, cplx* spec, std::size_t m, F f)
{
    for (std::size_t k = 0; k < xs.spectral_size(); ++k) {
        cplx* row = spec + k * m;
        if (!xs.kept(k)) {
            std::fill(row, row + m, cplx(0.0));
            continue;
        }
        const double s = f(k);
        for (std::size_t j = 0; j < m; ++j) row[j] *= s;
    }
}

class FpOperator {
public:
    FpOperator(const Discretization& disc, const PhysicalParams& params, const VelocityField& u_prev,
               const VelocityField& u_curr, double dt)
        : disc_(disc), xs_(disc.x()), q_(disc.q()), nx_(disc.nx()), nq_(disc.nq()), d_(disc.dim()), dt_(dt),
          eps_(params.epsilon), diff_scale_(dt / (2.0 * params.lambda)), u_(u_prev.values)
    {
        sigma_.resize(nx_ * d_ * d_);
        disc.velocity_gradient(u_curr, sigma_.data());
        drag_on_ = std::any_of(sigma_.begin(), sigma_.end(), [](double v) { return v != 0.0; });
        transport_on_ = std::any_of(u_.begin(), u_.end(), [](double v) { return v != 0.0; });
        spec_.resize(xs_.spectral_size() * nq_);
        work_.resize(xs_.spectral_size() * nq_);
        grid_.resize(nx_ * nq_);
        tmp_.resize(nx_ * nq_);

        std::vector<double> w(disc.springs());
        for (int i = 0; i < disc.springs(); ++i) w[i] = diff_scale_ * disc.rouse()(i, i);
        kron_ = q_.kron_eigenvalues(w);
    }

    bool drag_on() const { return drag_on_; }

    void apply(const double* in, double* out)
    {
        std::copy(in, in + nx_ * nq_, out);
        q_.apply_diffusion(disc_.rouse(), diff_scale_, in, out, nx_, true);

        // x-part: spectral Laplacian plus pseudo-spectral transport and drag, dealiased.
        xs_.forward(in, spec_.data(), static_cast<int>(nq_));
        spectral_scale(xs_, spec_.data(), nq_, [](std::size_t) { return 1.0; });
        std::fill(grid_.begin(), grid_.end(), 0.0);
        if (transport_on_) {
            for (int a = 0; a < d_; ++a) {
                for (std::size_t k = 0; k < xs_.spectral_size(); ++k) {
                    const cplx ik(0.0, xs_.wavenumber(k, a));
                    for (std::size_t j = 0; j < nq_; ++j) work_[k * nq_ + j] = ik * spec_[k * nq_ + j];
                }
                xs_.inverse(work_.data(), tmp_.data(), static_cast<int>(nq_));
                kernels::row_scaled_add(nx_, nq_, u_.data() + a, d_, tmp_.data(), nq_, grid_.data(), nq_);
            }
        }
        if (drag_on_) q_.apply_drag(sigma_.data(), -1.0, in, grid_.data(), nx_, true);
        if (transport_on_ || drag_on_) {
            xs_.forward(grid_.data(), work_.data(), static_cast<int>(nq_));
        } else {
            std::fill(work_.begin(), work_.end(), cplx(0.0));
        }
        for (std::size_t k = 0; k < xs_.spectral_size(); ++k) {
            const double lap = eps_ * xs_.k2(k);
            for (std::size_t j = 0; j < nq_; ++j) work_[k * nq_ + j] += lap * spec_[k * nq_ + j];
        }
        spectral_scale(xs_, work_.data(), nq_, [&](std::size_t) { return dt_; });
        xs_.inverse(work_.data(), tmp_.data(), static_cast<int>(nq_));
        kernels::axpy(1.0, {tmp_.data(), tmp_.size()}, {out, nx_ * nq_});
    }

    // Inverse of 1 + dt eps |k|^2 + dt/(2 lambda) sum_i A_ii S in the stiffness eigenbasis.
    void precondition(const double* in, double* out)
    {
        q_.rotate_to_eigen(in, tmp_.data(), nx_);
        xs_.forward(tmp_.data(), spec_.data(), static_cast<int>(nq_));
        for (std::size_t k = 0; k < xs_.spectral_size(); ++k) {
            cplx* row = spec_.data() + k * nq_;
            if (!xs_.kept(k)) {
                std::fill(row, row + nq_, cplx(0.0));
                continue;
            }
            const double base = 1.0 + dt_ * eps_ * xs_.k2(k);
            for (std::size_t j = 0; j < nq_; ++j) row[j] /= base + kron_[j];
        }
        xs_.inverse(spec_.data(), tmp_.data(), static_cast<int>(nq_));
        q_.rotate_from_eigen(tmp_.data(), out, nx_);
    }

    // out = dealiased Galerkin drag of a nodal field e: sum_i int M (sigma q_i) . grad_{q_i} phi_k e.
    void nodal_drag(const RealVector& e, double* out)
    {
        const QSpace& q = q_;
        const auto& rule = q.rule();
        const std::size_t nodes = q.total_nodes();
        const int K = disc_.springs();
        std::fill(grid_.begin(), grid_.end(), 0.0);
        RealVector weighted(nx_ * nodes);
        for (int i = 0; i < K; ++i) {
            for (int a = 0; a < d_; ++a) {
                for (std::size_t x = 0; x < nx_; ++x) {
                    const double* sig = sigma_.data() + x * d_ * d_;
                    for (std::size_t n = 0; n < nodes; ++n) {
                        const double ev = e[x * nodes + n];
                        double v = 0.0;
                        if (ev != 0.0) {
                            const int node = node_index(n, i);
                            const double* qi = rule.point(node);
                            for (int b = 0; b < d_; ++b) v += sig[a * d_ + b] * qi[b];
                            v *= ev;
                        }
                        weighted[x * nodes + n] = v;
                    }
                }
                q.project_node_gradient(i, a, weighted.data(), grid_.data(), nx_, true);
            }
        }
        xs_.forward(grid_.data(), work_.data(), static_cast<int>(nq_));
        spectral_scale(xs_, work_.data(), nq_, [](std::size_t) { return 1.0; });
        xs_.inverse(work_.data(), out, static_cast<int>(nq_));
    }

private:
    int node_index(std::size_t flat, int spring) const
    {
        const int nn = q_.spring_nodes();
        for (int j = disc_.springs() - 1; j > spring; --j) flat /= nn;
        return static_cast<int>(flat % nn);
    }

    const Discretization& disc_;
    const TorusSpace& xs_;
    const QSpace& q_;
    std::size_t nx_, nq_;
    int d_;
    double dt_, eps_, diff_scale_;
    const RealVector& u_;
    RealVector sigma_;
    bool drag_on_ = false, transport_on_ = false;
    ComplexVector spec_, work_;
    RealVector grid_, tmp_, kron_;
};

double weighted_norm(const RealVector& e, const std::vector<double>& w, std::size_t nx)
{
    const std::size_t nodes = w.size();
    double s = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t n = 0; n < nodes; ++n) s += w[n] * e[x * nodes + n] * e[x * nodes + n];
    return std::sqrt(s / static_cast<double>(nx));
}

double coefficient_norm(const RealVector& c, std::size_t nx)
{
    return kernels::nrm2({c.data(), c.size()}) / std::sqrt(static_cast<double>(nx));
}

// Nodal psi - beta(psi): the part of psi removed by the cut-off (and raised by the delta floor).
bool excess(const QSpace& q, const RealVector& psi, std::size_t nx, double L, double delta, RealVector& e)
{
    const std::size_t nodes = q.total_nodes();
    e.resize(nx * nodes);
    q.evaluate_nodes(psi.data(), e.data(), nx);
    bool any = false;
    for (auto& v : e) {
        double r = 0.0;
        if (v > L) r = v - L;
        else if (delta > 0.0 && v < delta) r = v - delta;
        if (r != 0.0) any = true;
        v = r;
    }
    return any;
}

struct PicardResult {
    bool converged = false;
    int iterations = 0;
    int krylov = 0;
    bool active = false;
    double increment = 0.0;
};

PicardResult picard(FpOperator& op, const Discretization& disc, const RealVector& rhs0, RealVector& psi, double L,
                    double delta, double dt, const PicardOptions& opt)
{
    const std::size_t nx = disc.nx(), n = disc.nx() * disc.nq();
    const QSpace& q = disc.q();
    std::vector<double> w(q.total_nodes());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = q.node_weight(j);

    PicardResult res;
    RealVector e, e_new, b(n), drag(n);
    res.active = excess(q, psi, nx, L, delta, e);
    const LinearOperator A = [&](const double* in, double* out) { op.apply(in, out); };
    const LinearOperator P = [&](const double* in, double* out) { op.precondition(in, out); };
    for (int it = 1; it <= opt.max_iter; ++it) {
        b = rhs0;
        if (op.drag_on() && res.active) {
            op.nodal_drag(e, drag.data());
            kernels::axpy(-dt, {drag.data(), n}, {b.data(), n});
        }
        const KrylovReport kr = gmres(n, A, P, b.data(), psi.data(), opt.krylov);
        res.krylov += kr.iterations;
        res.iterations = it;
        if (!kr.converged) {
            spdlog::debug("fp_step: Krylov stalled at relative residual {:.3e}", kr.relative_residual);
            return res;
        }
        if (!op.drag_on()) {
            res.converged = true;
            return res;
        }
        const bool active = excess(q, psi, nx, L, delta, e_new);
        RealVector diff(e_new);
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= e[j];
        res.increment = weighted_norm(diff, w, nx) / std::max(coefficient_norm(psi, nx), 1e-300);
        if (it > opt.damping_after)
            for (std::size_t j = 0; j < e_new.size(); ++j)
                e_new[j] = opt.damping * e_new[j] + (1.0 - opt.damping) * e[j];
        const bool was_active = res.active;
        e.swap(e_new);
        res.active = active;
        if (res.increment <= opt.tol && !(active && !was_active)) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

} // namespace

ConfigurationDensity fp_step(const Discretization& disc, const PhysicalParams& params,
                             const ConfigurationDensity& psi_prev, const VelocityField& u_prev,
                             const VelocityField& u_curr, double dt, double L, const PicardOptions& options,
                             FpReport* report, const ConfigurationDensity* guess)
{
    if (!(dt > 0.0)) fail(ErrorKind::InvalidParameter, "fp_step: dt must be > 0");
    FpOperator op(disc, params, u_prev, u_curr, dt);
    ConfigurationDensity psi{guess ? guess->coeffs : psi_prev.coeffs};
    FpReport rep;
    PicardResult r = picard(op, disc, psi_prev.coeffs, psi.coeffs, L, 0.0, dt, options);
    rep.picard_iterations = r.iterations;
    rep.krylov_iterations = r.krylov;
    rep.cutoff_active = r.active;
    rep.increment = r.increment;
    if (!r.converged) {
        spdlog::warn("fp_step: Picard did not converge in {} iterations (increment {:.3e}); delta continuation",
                     options.max_iter, r.increment);
        ConfigurationDensity best;
        double best_delta = 0.0;
        ConfigurationDensity trial = psi;
        for (double delta = options.delta0; delta >= options.delta_min; delta *= 0.5) {
            PicardResult rd = picard(op, disc, psi_prev.coeffs, trial.coeffs, L, delta, dt, options);
            rep.picard_iterations += rd.iterations;
            rep.krylov_iterations += rd.krylov;
            if (rd.converged) {
                best = trial;
                best_delta = delta;
                rep.cutoff_active = rd.active;
                rep.increment = rd.increment;
            }
        }
        if (best.coeffs.empty()) {
            std::ostringstream msg;
            msg << "fp_step: Picard iteration failed for the cut-off and every delta-regularized system (last increment "
                << r.increment << ")";
            fail(ErrorKind::Solver, msg.str());
        }
        rep.used_delta = true;
        rep.delta = best_delta;
        psi = std::move(best);
    }
    if (report) *report = rep;
    return psi;
}

MarginalDensity marginal(const Discretization& disc, const ConfigurationDensity& psi)
{
    return disc.marginal(psi);
}

MarginalDensity marginal_step(const Discretization& disc, double epsilon, const MarginalDensity& zeta_prev,
                              const VelocityField& u_prev, double dt)
{
    const TorusSpace& xs = disc.x();
    const std::size_t nx = xs.size(), nk = xs.spectral_size();
    const int d = xs.dim();
    ComplexVector spec(nk), work(nk);
    RealVector grid(nx), tmp(nx);

    const LinearOperator A = [&](const double* in, double* out) {
        xs.forward(in, spec.data(), 1);
        spectral_scale(xs, spec.data(), 1, [](std::size_t) { return 1.0; });
        std::fill(grid.begin(), grid.end(), 0.0);
        for (int a = 0; a < d; ++a) {
            for (std::size_t k = 0; k < nk; ++k) work[k] = cplx(0.0, xs.wavenumber(k, a)) * spec[k];
            xs.inverse(work.data(), tmp.data(), 1);
            for (std::size_t x = 0; x < nx; ++x) grid[x] += u_prev.values[x * d + a] * tmp[x];
        }
        xs.forward(grid.data(), work.data(), 1);
        for (std::size_t k = 0; k < nk; ++k) work[k] = dt * (work[k] + epsilon * xs.k2(k) * spec[k]);
        spectral_scale(xs, work.data(), 1, [](std::size_t) { return 1.0; });
        xs.inverse(work.data(), tmp.data(), 1);
        for (std::size_t x = 0; x < nx; ++x) out[x] = in[x] + tmp[x];
    };
    const LinearOperator P = [&](const double* in, double* out) {
        xs.forward(in, spec.data(), 1);
        spectral_scale(xs, spec.data(), 1, [&](std::size_t k) { return 1.0 / (1.0 + dt * epsilon * xs.k2(k)); });
        xs.inverse(spec.data(), out, 1);
    };
    MarginalDensity z{zeta_prev.values};
    const KrylovReport kr = gmres(nx, A, P, zeta_prev.values.data(), z.values.data());
    if (!kr.converged) fail(ErrorKind::Solver, "marginal_step: linear solve did not converge");
    return z;
}

ConfigurationDensity apply_cutoff(const Discretization& disc, const ConfigurationDensity& psi, double L, bool* active)
{
    const QSpace& q = disc.q();
    const std::size_t nx = disc.nx(), nodes = q.total_nodes(), nq = disc.nq();
    RealVector vals(nx * nodes);
    q.evaluate_nodes(psi.coeffs.data(), vals.data(), nx);
    bool any = false;
    for (auto& v : vals)
        if (v > L) {
            v = L;
            any = true;
        }
    if (active) *active = any;
    if (!any) return psi;
    ConfigurationDensity out{RealVector(nx * nq)};
    q.project_nodes(vals.data(), out.coeffs.data(), nx, false);
    const TorusSpace& xs = disc.x();
    ComplexVector spec(xs.spectral_size() * nq);
    xs.forward(out.coeffs.data(), spec.data(), static_cast<int>(nq));
    spectral_scale(xs, spec.data(), nq, [](std::size_t) { return 1.0; });
    xs.inverse(spec.data(), out.coeffs.data(), static_cast<int>(nq));
    return out;
}

ConfigurationDensity lift_initial_density(const Discretization& disc, const ConfigurationDensity& psi0, double dt,
                                          double L)
{
    if (!(dt > 0.0)) fail(ErrorKind::InvalidParameter, "lift_initial_density: dt must be > 0");
    const ConfigurationDensity src = apply_cutoff(disc, psi0, L);
    const TorusSpace& xs = disc.x();
    const QSpace& q = disc.q();
    const std::size_t nx = disc.nx(), nq = disc.nq();
    std::vector<double> ones(disc.springs(), dt);
    const RealVector lam = q.kron_eigenvalues(ones);
    RealVector rot(nx * nq);
    ComplexVector spec(xs.spectral_size() * nq);
    q.rotate_to_eigen(src.coeffs.data(), rot.data(), nx);
    xs.forward(rot.data(), spec.data(), static_cast<int>(nq));
    for (std::size_t k = 0; k < xs.spectral_size(); ++k) {
        cplx* row = spec.data() + k * nq;
        if (!xs.kept(k)) {
            std::fill(row, row + nq, cplx(0.0));
            continue;
        }
        const double base = 1.0 + dt * xs.k2(k);
        for (std::size_t j = 0; j < nq; ++j) row[j] /= base + lam[j];
    }
    xs.inverse(spec.data(), rot.data(), static_cast<int>(nq));
    ConfigurationDensity out{RealVector(nx * nq)};
    q.rotate_from_eigen(rot.data(), out.coeffs.data(), nx);
    return out;
}

} // namespace polykinetic
