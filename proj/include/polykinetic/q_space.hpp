#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "polykinetic/aligned.hpp"
#include "polykinetic/maxwellian.hpp"

namespace polykinetic {

// Row-major dense matrix with a cached transpose for the GEMM kernels.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    RealVector a;
    RealVector at;

    DenseMatrix() = default;
    explicit DenseMatrix(const Eigen::MatrixXd& m);
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    Eigen::MatrixXd to_eigen() const;
};

// L^2_M-orthonormal polynomial basis of total degree <= P per spring, tensorized over K springs.
// Coefficient vectors of a q-function have size() entries, spring-major
// (flat = sum_i l_i * ns^(K-1-i)); basis function 0 is the constant 1.
class QSpace {
public:
    QSpace(const MaxwellianModel& model, int degree);

    int springs() const { return K_; }
    int dim() const { return d_; }
    int degree() const { return P_; }
    std::size_t size() const { return nq_; }
    int spring_size() const { return ns_; }
    int spring_nodes() const { return nn_; }
    std::size_t total_nodes() const { return nn_total_; }
    const MaxwellianModel& maxwellian() const { return *model_; }

    const std::vector<std::array<int, 3>>& exponents() const { return exponents_; }
    int index_of(std::array<int, 3> exps) const;  // spring-basis index, -1 when absent
    int total_degree(int l) const;
    std::vector<int> multi_index(std::size_t flat) const;
    std::size_t flat_index(std::span<const int> per_spring) const;

    // Spring basis at an arbitrary point: values (ns), gradients (ns x d, row-major).
    void evaluate_spring(std::span<const double> q, double* values, double* grads) const;
    // Full basis at a configuration q (K*d entries).
    void evaluate(std::span<const double> q, double* values) const;

    // Per-spring quadrature node data.
    const QuadratureRule& rule() const { return model_->rule(); }
    const DenseMatrix& node_values() const { return V_; }            // nn x ns
    const DenseMatrix& node_gradient(int c) const { return G_[c]; }  // nn x ns
    std::vector<int> node_multi_index(std::size_t flat_node) const;
    double node_weight(std::size_t flat_node) const;

    // Spring matrices.
    const DenseMatrix& stiffness() const { return S_; }                       // int M grad phi_k . grad phi_l
    const DenseMatrix& drag(int a, int b) const { return T_[a * d_ + b]; }   // int M phi_l q_b d_a phi_k
    const DenseMatrix& derivative_gram(int c) const { return E_[c]; }        // int M phi_k d_c phi_l
    const DenseMatrix& stress_moments() const { return mom_; }                // ns x d^2
    std::span<const double> theta_moments() const { return theta_mom_; }
    const DenseMatrix& stiffness_eigenvectors() const { return Q_; }
    std::span<const double> stiffness_eigenvalues() const { return lam_; }

    // Kronecker-sum spectrum sum_i weight_i * lambda(l_i) in the rotated basis.
    RealVector kron_eigenvalues(std::span<const double> weight) const;

    // Batched operators on nx coefficient rows of size() entries each.
    void apply_diffusion(const Eigen::MatrixXd& A, double scale, const double* in, double* out, std::size_t nx, bool accumulate) const;
    // out_k(x) += scale * sum_i sum_ab sigma_ab(x) (T^(i)_ab psi(x))_k; sigma is nx x d^2 with sigma_ab = d u_a / d x_b.
    void apply_drag(const double* sigma, double scale, const double* in, double* out, std::size_t nx, bool accumulate) const;
    void rotate_to_eigen(const double* in, double* out, std::size_t nx) const;
    void rotate_from_eigen(const double* in, double* out, std::size_t nx) const;

    // Nodal evaluation: out is nx x total_nodes().
    void evaluate_nodes(const double* in, double* out, std::size_t nx) const;
    void evaluate_node_gradient(int spring, int c, const double* in, double* out, std::size_t nx) const;
    // out_l = sum_nodes w phi_l g and the gradient-weighted variant sum_nodes w d_{spring,c} phi_l g.
    void project_nodes(const double* nodal, double* out, std::size_t nx, bool accumulate) const;
    void project_node_gradient(int spring, int c, const double* nodal, double* out, std::size_t nx, bool accumulate) const;

    // C_i(x) (d x d, row-major) for each x: out is nx x d^2.
    void kramers(int spring, const double* in, double* out, std::size_t nx) const;
    void theta_moment(int spring, const double* in, double* out, std::size_t nx) const;

    double gram_error() const { return gram_error_; }

private:
    void mode_apply(const DenseMatrix& B, int axis, const double* in, double* out, std::size_t nx,
                    std::vector<int>& dims, bool accumulate) const;
    // Apply one matrix per axis (nullptr = identity), left to right.
    void kron_apply(const std::vector<const DenseMatrix*>& mats, const double* in, double* out, std::size_t nx,
                    bool accumulate) const;
    void eval_start(std::span<const double> q, double* t, double* dt) const;

    const MaxwellianModel* model_;
    int K_, d_, P_, ns_, nn_;
    std::size_t nq_, nn_total_;
    std::vector<std::array<int, 3>> exponents_;
    Recurrence marginal_;
    Eigen::MatrixXd coeff_;  // phi = coeff * t
    DenseMatrix V_, VW_;
    std::vector<DenseMatrix> G_, GW_;
    DenseMatrix S_, Q_, Qt_, mom_, drag_stack_;
    std::vector<DenseMatrix> T_, E_, Et_;
    RealVector lam_, theta_mom_;
    double gram_error_ = 0.0;
};

} // namespace polykinetic
