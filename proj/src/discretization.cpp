#include "polykinetic/discretization.hpp"

#include <algorithm>
#include <cmath>

#include "polykinetic/errors.hpp"

namespace polykinetic {

QuadratureResolution quadrature_for(const Resolution& res, int dim)
{
    QuadratureResolution q = default_quadrature_resolution(res.q_degree, dim);
    if (res.radial_per_panel > 0) q.radial_per_panel = res.radial_per_panel;
    if (res.angular > 0) q.angular = res.angular;
    return q;
}

Discretization::Discretization(const PhysicalParams& params, const ChainSpec& chain, const Resolution& res,
                               const DomainSpec& domain)
    : domain_(domain), res_(res), d_(params.d), K_(params.K), A_(chain.rouse_matrix)
{
    if (domain.kind != DomainKind::PeriodicTorus)
        fail(ErrorKind::InvalidParameter, "build_spaces: only the periodic torus is supported by the solver");
    if (domain.dim != params.d) fail(ErrorKind::InvalidParameter, "build_spaces: domain dimension differs from d");
    if (res.x_grid < 4) fail(ErrorKind::Resolution, "build_spaces: x_grid must be >= 4");
    x_ = std::make_unique<TorusSpace>(params.d, res.x_grid, domain.side);
    maxwellian_ = std::make_unique<MaxwellianModel>(chain.potential, params.K, params.d, quadrature_for(res, params.d));
    q_ = std::make_unique<QSpace>(*maxwellian_, res.q_degree);
    if (q_->gram_error() > 1e-12) fail(ErrorKind::Resolution, "build_spaces: mass matrix deviates from identity");
}

std::unique_ptr<Discretization> build_spaces(const PhysicalParams& params, const ChainSpec& chain,
                                             const Resolution& res, const DomainSpec& domain)
{
    DomainSpec dom = domain;
    dom.dim = params.d;
    return std::make_unique<Discretization>(params, chain, res, dom);
}

VelocityField Discretization::zero_velocity() const
{
    return {RealVector(nx() * d_, 0.0)};
}

ConfigurationDensity Discretization::constant_density(double c) const
{
    ConfigurationDensity p{RealVector(nx() * nq(), 0.0)};
    for (std::size_t x = 0; x < nx(); ++x) p.coeffs[x * nq()] = c;
    return p;
}

void Discretization::velocity_gradient(const VelocityField& u, double* sigma) const
{
    x_->gradient(u.values.data(), sigma, d_);
}

void Discretization::leray_project(VelocityField& u) const
{
    x_->leray(u.values.data());
}

MarginalDensity Discretization::marginal(const ConfigurationDensity& psi) const
{
    MarginalDensity z{RealVector(nx())};
    for (std::size_t x = 0; x < nx(); ++x) z.values[x] = psi.coeffs[x * nq()];
    return z;
}

void Discretization::sweep(const ConfigurationDensity& psi, NodalRequest request,
                           const std::function<void(const NodalBlock&)>& visit) const
{
    const std::size_t nxs = nx(), nqs = nq(), nodes = q_->total_nodes();
    const std::size_t chunk = std::clamp<std::size_t>(262144 / std::max<std::size_t>(nodes, 1), 1, nxs);

    std::vector<RealVector> dx;
    if (request.grad_x) {
        RealVector g(nxs * nqs * d_);
        x_->gradient(psi.coeffs.data(), g.data(), static_cast<int>(nqs));
        dx.assign(d_, RealVector(nxs * nqs));
        for (std::size_t x = 0; x < nxs; ++x)
            for (std::size_t l = 0; l < nqs; ++l)
                for (int a = 0; a < d_; ++a) dx[a][x * nqs + l] = g[(x * nqs + l) * d_ + a];
    }

    const int ncomp = K_ * d_;
    RealVector vals(chunk * nodes);
    RealVector gq(request.grad_q ? chunk * nodes * ncomp : 0);
    RealVector gx(request.grad_x ? chunk * nodes * d_ : 0);
    for (std::size_t x0 = 0; x0 < nxs; x0 += chunk) {
        const std::size_t cnt = std::min(chunk, nxs - x0);
        const double* in = psi.coeffs.data() + x0 * nqs;
        q_->evaluate_nodes(in, vals.data(), cnt);
        if (request.grad_q)
            for (int i = 0; i < K_; ++i)
                for (int c = 0; c < d_; ++c)
                    q_->evaluate_node_gradient(i, c, in, gq.data() + (i * d_ + c) * cnt * nodes, cnt);
        if (request.grad_x)
            for (int a = 0; a < d_; ++a) q_->evaluate_nodes(dx[a].data() + x0 * nqs, gx.data() + a * cnt * nodes, cnt);
        NodalBlock block;
        block.x0 = x0;
        block.count = cnt;
        block.nodes = nodes;
        block.values = vals.data();
        block.grad_q = request.grad_q ? gq.data() : nullptr;
        block.grad_x = request.grad_x ? gx.data() : nullptr;
        visit(block);
    }
}

double Discretization::ibp_residual(const Eigen::MatrixXd& B, const double* phi) const
{
    if (B.rows() != d_ || B.cols() != d_) fail(ErrorKind::InvalidParameter, "ibp_residual: B must be d x d");
    if (std::abs(B.trace()) > 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff()))
        fail(ErrorKind::Precondition, "ibp_residual: B must be trace-free");
    const std::size_t nodes = q_->total_nodes();
    RealVector vals(nodes);
    q_->evaluate_nodes(phi, vals.data(), 1);
    std::vector<RealVector> grads(K_ * d_, RealVector(nodes));
    for (int i = 0; i < K_; ++i)
        for (int c = 0; c < d_; ++c) q_->evaluate_node_gradient(i, c, phi, grads[i * d_ + c].data(), 1);
    const auto& rule = q_->rule();
    const auto& spec = maxwellian_->potential_spec();
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t n = 0; n < nodes; ++n) {
        const auto idx = q_->node_multi_index(n);
        const double w = q_->node_weight(n);
        double l = 0.0, r = 0.0;
        for (int i = 0; i < K_; ++i) {
            const double* qi = rule.point(idx[i]);
            const double up = potential(rule.s[idx[i]], spec, 1);
            for (int a = 0; a < d_; ++a) {
                double bq = 0.0;
                for (int b = 0; b < d_; ++b) bq += B(a, b) * qi[b];
                l += bq * grads[i * d_ + a][n];
                r += up * qi[a] * bq;
            }
        }
        lhs += w * l;
        rhs += w * vals[n] * r;
    }
    return std::abs(lhs - rhs);
}

} // namespace polykinetic
