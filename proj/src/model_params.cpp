#include "polykinetic/model_params.hpp"

#include <cmath>
#include <sstream>

#include "polykinetic/errors.hpp"

namespace polykinetic {

RouseResult rouse_matrix(int K)
{
    if (K < 1) fail(ErrorKind::InvalidParameter, "K must be >= 1");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
    for (int i = 0; i < K; ++i) {
        A(i, i) = 2.0;
        if (i + 1 < K) {
            A(i, i + 1) = -1.0;
            A(i + 1, i) = -1.0;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
    return {A, eig.eigenvalues().minCoeff()};
}

ChainSpec make_chain(int K, const PotentialSpec& potential)
{
    auto r = rouse_matrix(K);
    return {r.A, r.a0, potential};
}

CutoffSchedule cutoff_schedule(double L, double C0, double T)
{
    if (!(L > 1.0)) fail(ErrorKind::InvalidParameter, "L must be > 1");
    if (!(C0 > 0.0)) fail(ErrorKind::InvalidParameter, "C0 must be > 0");
    if (!(T > 0.0)) fail(ErrorKind::InvalidParameter, "T must be > 0");
    double n = std::ceil(T * L * std::log(L) / C0);
    if (n < 1.0) n = 1.0;
    if (n > 1e8) fail(ErrorKind::InvalidParameter, "cut-off schedule needs more than 1e8 steps");
    CutoffSchedule s;
    s.L = L;
    s.C0 = C0;
    s.N = static_cast<int>(n);
    s.dt = T / n;
    s.linked = true;
    return s;
}

CutoffSchedule fixed_step_schedule(double L, double T, int N)
{
    if (!(L > 1.0)) fail(ErrorKind::InvalidParameter, "L must be > 1");
    if (!(T > 0.0)) fail(ErrorKind::InvalidParameter, "T must be > 0");
    if (N < 1) fail(ErrorKind::InvalidParameter, "steps must be >= 1");
    CutoffSchedule s;
    s.L = L;
    s.C0 = 0.0;
    s.N = N;
    s.dt = T / N;
    s.linked = false;
    return s;
}

GrowthConstants growth_constants(const PotentialSpec& p)
{
    GrowthConstants g;
    g.c1 = std::pow(p.s_inf, 1.0 - p.theta) / p.theta;
    g.c2 = 1.0;
    g.c3 = std::pow(p.s_inf, 1.0 - p.theta);
    return g;
}

ValidatedModel validate_params(const PhysicalParams& params, const ChainSpec& chain)
{
    std::vector<std::string> issues;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) issues.push_back(std::string(name) + " must be > 0");
    };
    positive(params.nu, "nu");
    positive(params.k, "k");
    positive(params.lambda, "lambda");
    positive(params.epsilon, "epsilon");
    positive(params.T, "T");
    if (params.K < 1) issues.push_back("K must be >= 1");
    if (params.d != 2 && params.d != 3) issues.push_back("d must be 2 or 3");
    if (!(chain.potential.theta > 1.0)) issues.push_back("theta must exceed 1");
    if (!(chain.potential.s_inf > 0.0)) issues.push_back("s_inf must be > 0");
    if (params.body_force.kind == ForceKind::Sinusoidal) {
        const auto& m = params.body_force.mode;
        bool nonzero = m[0] != 0 || m[1] != 0 || (params.d == 3 && m[2] != 0);
        if (!nonzero) issues.push_back("force_mode must be a nonzero wave vector");
        if (params.d == 2 && m[2] != 0) issues.push_back("force_mode has a third component in d=2");
    }
    if (chain.rouse_matrix.rows() != params.K || chain.rouse_matrix.cols() != params.K) {
        issues.push_back("rouse_matrix must be K x K");
    } else {
        if ((chain.rouse_matrix - chain.rouse_matrix.transpose()).cwiseAbs().maxCoeff() > 0.0)
            issues.push_back("rouse_matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(chain.rouse_matrix, Eigen::EigenvaluesOnly);
        double a0 = eig.eigenvalues().minCoeff();
        if (!(a0 > 0.0)) issues.push_back("a0 must be > 0 (rouse_matrix not positive definite)");
        else if (std::abs(a0 - chain.a0) > 1e-12 * std::max(1.0, a0))
            issues.push_back("a0 does not match the smallest eigenvalue of rouse_matrix");
    }
    if (!issues.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < issues.size(); ++i) os << (i ? "; " : "") << issues[i];
        fail(ErrorKind::InvalidParameter, os.str());
    }
    return {params, chain, growth_constants(chain.potential)};
}

} // namespace polykinetic
