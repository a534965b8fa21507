#pragma once

#include <cstddef>
#include <limits>

#include "polykinetic/discretization.hpp"

namespace polykinetic {

enum class Direction { X, Q };

// Everything the diagnostics need from one nodal pass over psi_hat.
struct FunctionalValues {
    double relative_entropy = 0.0;  // int int M F(max(psi, 0))
    double entropy_L = 0.0;         // int int M F^L(max(psi, 0))
    double fisher_x = 0.0;          // int int M |grad_x psi|^2 / psi
    double fisher_q = 0.0;
    double fisher_q_L = 0.0;        // int int M |grad_q psi|^2 / min(psi, L)
    double l1_deviation = 0.0;      // ||psi - 1||_{L^1_M(Omega x D)}
    double conditional_entropy = 0.0;  // int int M psi log(psi / zeta)
    double psi_min = std::numeric_limits<double>::infinity();
    double psi_max = -std::numeric_limits<double>::infinity();
    std::size_t min_x = 0;
    std::size_t min_node = 0;
    double cutoff_fraction = 0.0;   // nu-measure fraction where psi >= L
    double mass_min = 0.0;
    double mass_max = 0.0;
};

FunctionalValues evaluate_functionals(const Discretization& disc, const ConfigurationDensity& psi,
                                      double L = std::numeric_limits<double>::infinity());

double relative_entropy(const Discretization& disc, const ConfigurationDensity& psi, double negativity_tol = 1e-6);
double fisher_information(const Discretization& disc, const ConfigurationDensity& psi, Direction direction,
                          double negativity_tol = 1e-6);

struct InequalityAudit {
    double csiszar_kullback_gap = 0.0;
    double log_sobolev_gap = 0.0;
    double log_young_min = 0.0;
};

InequalityAudit inequality_audits(const Discretization& disc, const ConfigurationDensity& psi, double kappa);
InequalityAudit inequality_audits(const FunctionalValues& values, double volume, double kappa);

// Smallest log-Young residual over a fixed (r, s) sample grid.
double log_young_samples();

} // namespace polykinetic
