#pragma once

#include <limits>

namespace polykinetic {

enum class FamilyKind { F, FL, FLDelta, BetaL, BetaLDelta, GLDelta, GL };

// A scalar function from the entropy toolkit with its parameters bound.
struct ScalarFamily {
    FamilyKind kind = FamilyKind::F;
    double L = std::numeric_limits<double>::infinity();
    double delta = 0.0;

    // order 0 value, 1 first derivative, 2 second derivative (where defined for the kind)
    double operator()(double s, int order = 0) const;
};

// F(s) = s(log s - 1) + 1, with F(0) = 1.
double entropy_F(double s);

// F^L and its first two derivatives; L = infinity gives F.
double entropy_family(double s, double L, int order);

double beta(double s, double L);

// F^L_delta family on all of R.
double regularized_family(double s, double L, double delta, int order);
double beta_delta(double s, double L, double delta);
double G_delta(double s, double L, double delta, int order);
double G_L(double s, double L, int order);

// r log r - r + e^s - r s >= 0 for r >= 0.
double log_young_residual(double r, double s);

} // namespace polykinetic
