#pragma once

#include <string>
#include <vector>

namespace polykinetic {

struct SelfCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
};

// Invariant suite on a small default model.
std::vector<SelfCheck> run_selftest(unsigned seed = 7);

// Largest IBP residual over every q-basis function and `trials` random trace-free B.
double ibp_worst_residual(int q_degree, int K, int trials, unsigned seed);

} // namespace polykinetic
