#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "polykinetic/fields.hpp"
#include "polykinetic/maxwellian.hpp"
#include "polykinetic/model_params.hpp"
#include "polykinetic/q_space.hpp"
#include "polykinetic/torus_space.hpp"

namespace polykinetic {

struct Resolution {
    int x_grid = 32;         // grid points per axis; resolved modes |k| <= (x_grid - 1) / 3
    int q_degree = 8;        // total polynomial degree per spring
    int radial_per_panel = 0;  // 0 selects the default for q_degree
    int angular = 0;

    bool operator==(const Resolution&) const = default;
};

QuadratureResolution quadrature_for(const Resolution& res, int dim);

struct NodalRequest {
    bool grad_q = false;
    bool grad_x = false;
};

// Values of psi_hat on a block of x-points at every tensor q-node.
struct NodalBlock {
    std::size_t x0 = 0;
    std::size_t count = 0;
    std::size_t nodes = 0;
    const double* values = nullptr;  // count x nodes
    const double* grad_q = nullptr;  // (K*d) arrays of count x nodes, component (i, c) at index i*d + c
    const double* grad_x = nullptr;  // d arrays of count x nodes
};

class Discretization {
public:
    Discretization(const PhysicalParams& params, const ChainSpec& chain, const Resolution& res,
                   const DomainSpec& domain);

    const TorusSpace& x() const { return *x_; }
    const QSpace& q() const { return *q_; }
    const MaxwellianModel& maxwellian() const { return *maxwellian_; }
    const Eigen::MatrixXd& rouse() const { return A_; }
    const Resolution& resolution() const { return res_; }
    const DomainSpec& domain() const { return domain_; }
    int dim() const { return d_; }
    int springs() const { return K_; }
    std::size_t nx() const { return x_->size(); }
    std::size_t nq() const { return q_->size(); }

    VelocityField zero_velocity() const;
    ConfigurationDensity constant_density(double c) const;

    // sigma_ab = d u_a / d x_b on the grid, nx x d^2.
    void velocity_gradient(const VelocityField& u, double* sigma) const;
    void leray_project(VelocityField& u) const;
    MarginalDensity marginal(const ConfigurationDensity& psi) const;

    // Visits psi at (x-grid x q-nodes) in blocks of x-points.
    void sweep(const ConfigurationDensity& psi, NodalRequest request,
               const std::function<void(const NodalBlock&)>& visit) const;

    // |int M sum_i (B q_i) . grad_i phi - int M phi sum_i U_i' q_i q_i^T : B| for a q-function given by coefficients.
    double ibp_residual(const Eigen::MatrixXd& B, const double* phi) const;

private:
    DomainSpec domain_;
    Resolution res_;
    int d_, K_;
    Eigen::MatrixXd A_;
    std::unique_ptr<TorusSpace> x_;
    std::unique_ptr<MaxwellianModel> maxwellian_;
    std::unique_ptr<QSpace> q_;
};

std::unique_ptr<Discretization> build_spaces(const PhysicalParams& params, const ChainSpec& chain,
                                             const Resolution& res, const DomainSpec& domain = {});

} // namespace polykinetic
