#pragma once

#include <cstddef>
#include <functional>

namespace polykinetic {

using LinearOperator = std::function<void(const double* in, double* out)>;

struct KrylovOptions {
    double tol = 1e-12;  // relative to ||b||
    int restart = 60;
    int max_iter = 3000;
};

struct KrylovReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

// Restarted GMRES, right-preconditioned, modified Gram-Schmidt. x holds the initial guess.
KrylovReport gmres(std::size_t n, const LinearOperator& A, const LinearOperator& precond, const double* b, double* x,
                   const KrylovOptions& options = {});

} // namespace polykinetic
