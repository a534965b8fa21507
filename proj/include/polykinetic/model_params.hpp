#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polykinetic {

enum class ForceKind { Zero, Sinusoidal };
enum class ForceTimeProfile { Constant, Linear, Cosine };

// Body force f(x,t) = amplitude * g(t) * e_perp * sin(2 pi mode . x); e_perp is orthogonal to mode,
// so the field is solenoidal before projection.
struct ForceSpec {
    ForceKind kind = ForceKind::Zero;
    double amplitude = 0.0;
    std::array<int, 3> mode{0, 1, 0};
    ForceTimeProfile profile = ForceTimeProfile::Constant;
    double omega = 1.0;

    bool operator==(const ForceSpec&) const = default;
};

struct PhysicalParams {
    double nu = 1.0;
    double k = 1.0;
    double lambda = 1.0;
    double epsilon = 0.1;
    int K = 1;
    int d = 2;
    double T = 1.0;
    ForceSpec body_force{};

    bool operator==(const PhysicalParams&) const = default;
};

struct PotentialSpec {
    double theta = 2.0;
    double s_inf = 4.0;

    bool operator==(const PotentialSpec&) const = default;
};

struct ChainSpec {
    Eigen::MatrixXd rouse_matrix;
    double a0 = 0.0;
    PotentialSpec potential{};
};

struct RouseResult {
    Eigen::MatrixXd A;
    double a0;
};

struct CutoffSchedule {
    double L = 0.0;
    double delta = 1e-4;
    double C0 = 0.5;
    double dt = 0.0;
    int N = 0;
    bool linked = true;
};

// Constants of the growth conditions implied by the piecewise potential:
// U ~ c1 s^theta at infinity, U'(s) <= c2 + c3 s^(theta-1).
struct GrowthConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

struct ValidatedModel {
    PhysicalParams params;
    ChainSpec chain;
    GrowthConstants growth;
};

RouseResult rouse_matrix(int K);
ChainSpec make_chain(int K, const PotentialSpec& potential);

CutoffSchedule cutoff_schedule(double L, double C0, double T);
// Fixed step count with the dt-L link switched off (refinement studies only).
CutoffSchedule fixed_step_schedule(double L, double T, int N);

GrowthConstants growth_constants(const PotentialSpec& potential);

// Collects every violated invariant into one InvalidParameter error.
ValidatedModel validate_params(const PhysicalParams& params, const ChainSpec& chain);

} // namespace polykinetic
