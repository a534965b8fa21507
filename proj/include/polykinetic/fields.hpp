#pragma once

#include <cstddef>

#include "polykinetic/aligned.hpp"

namespace polykinetic {

// Grid values, nx x d interleaved.
struct VelocityField {
    RealVector values;
};

// Coefficients of psi_hat = psi / M: nx rows of q-basis coefficients.
struct ConfigurationDensity {
    RealVector coeffs;
};

// zeta(x) = int M psi_hat dq on the grid.
struct MarginalDensity {
    RealVector values;
};

struct State {
    double t = 0.0;
    int step = 0;
    VelocityField u;
    ConfigurationDensity psi;
};

} // namespace polykinetic
