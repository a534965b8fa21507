#pragma once

#include <functional>
#include <span>
#include <vector>

#include "polykinetic/model_params.hpp"

namespace polykinetic {

// U(s) (order 0), U'(s) (order 1), U''(s) (order 2) of the piecewise potential.
double potential(double s, const PotentialSpec& spec, int order);

struct GaussRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Three-term recurrence of the monic-normalized orthonormal family:
// sqrt(b[k+1]) p_{k+1} = (x - a[k]) p_k - sqrt(b[k]) p_{k-1}, b[0] = total mass.
struct Recurrence {
    std::vector<double> alpha;
    std::vector<double> beta;
};

GaussRule1D gauss_legendre(int n);  // on [-1, 1]

// Discretized Stieltjes procedure (Lanczos with full reorthogonalization) on a discrete measure.
Recurrence stieltjes(std::span<const double> x, std::span<const double> w, int n);

// Golub-Welsch: eigen-decomposition of the Jacobi matrix.
GaussRule1D golub_welsch(const Recurrence& rec, int n);

struct QuadratureResolution {
    int radial_per_panel = 6;
    int angular = 18;  // d=2: points on the circle; d=3: Gauss-Legendre points in cos(theta)

    bool operator==(const QuadratureResolution&) const = default;
};

QuadratureResolution default_quadrature_resolution(int degree, int dim);

// Per-spring product rule for the normalized measure M_i dq_i: Gauss in s = |q|^2/2 on the panels
// [0, s_inf] and [s_inf, s_max], times an angular rule. Weights sum to one.
struct QuadratureRule {
    int dim = 2;
    std::vector<double> points;   // size() x dim, row-major
    std::vector<double> weights;  // > 0, sum 1
    std::vector<double> s;        // |q|^2 / 2 per node
    double truncation_s = 0.0;
    double truncation_radius = 0.0;
    int exactness_degree = 0;
    int radial_nodes = 0;
    int angular_nodes = 0;

    std::size_t size() const { return weights.size(); }
    const double* point(std::size_t j) const { return points.data() + j * dim; }
};

QuadratureRule build_quadrature(const PotentialSpec& spec, int dim, const QuadratureResolution& res);

// s beyond which exp(-U) < exp(-50).
double truncation_level(const PotentialSpec& spec);

class MaxwellianModel {
public:
    MaxwellianModel(const PotentialSpec& spec, int springs, int dim, const QuadratureResolution& res);

    const PotentialSpec& potential_spec() const { return spec_; }
    int springs() const { return K_; }
    int dim() const { return d_; }
    double normalization() const { return Z_; }  // Z_i, same for every spring
    double tail_constant() const;                // c_{i4}: M_i ~ c4 exp(-c1 s^theta)
    const QuadratureRule& rule() const { return rule_; }

    double spring_density(std::span<const double> qi) const;
    double density(std::span<const double> q) const;  // q has K*d entries

    // E_M[g(s_i)] for a single spring, by fine composite Gauss-Legendre in r, truncated at s_max * scale.
    double radial_expectation(const std::function<double(double)>& g, double truncation_scale = 1.0) const;

    double moment_power(int p) const;  // int M (1 + |q|)^p dq over all springs
    double theta_moment() const;       // int M_i (|q_i|^2 / 2)^theta dq_i
    double second_moment() const;      // C_M = int M |q|^2 dq
    double force_moment() const;       // int M_i U'^2 |q_i|^4 dq_i
    double exp_moment(double c1) const;  // int M_i exp(c1/2 * s^theta) dq_i
    double bakry_emery_modulus() const;

private:
    PotentialSpec spec_;
    int K_;
    int d_;
    double Z_ = 0.0;
    double s_max_ = 0.0;
    QuadratureRule rule_;
    std::vector<double> fine_r_;
    std::vector<double> fine_w_;  // normalized probability weights of |q_i|
};

double bakry_emery_modulus(const PotentialSpec& spec);

} // namespace polykinetic
