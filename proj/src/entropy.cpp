#include "polykinetic/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

void require_nonnegative(double s, const char* where)
{
    if (!(s >= 0.0)) {
        std::ostringstream os;
        os << where << ": s must be >= 0 (got " << s << ")";
        fail(ErrorKind::Domain, os.str());
    }
}

void require_delta(double L, double delta)
{
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::InvalidParameter, "delta must lie in (0,1)");
    if (!(L > 1.0)) fail(ErrorKind::InvalidParameter, "L must be > 1");
}

} // namespace

double entropy_F(double s)
{
    require_nonnegative(s, "F");
    if (s < 1e-300) return 1.0;
    return s * (std::log(s) - 1.0) + 1.0;
}

double entropy_family(double s, double L, int order)
{
    require_nonnegative(s, "entropy_family");
    if (!(L > 1.0)) fail(ErrorKind::InvalidParameter, "L must be > 1");
    if (order < 0 || order > 2) fail(ErrorKind::InvalidParameter, "entropy_family: order must be 0, 1 or 2");
    if (s <= L) {
        if (order == 0) return entropy_F(s);
        if (s == 0.0) fail(ErrorKind::Pole, "entropy_family: derivative has a pole at s = 0");
        return order == 1 ? std::log(s) : 1.0 / s;
    }
    switch (order) {
    case 0: return (s * s - L * L) / (2.0 * L) + s * (std::log(L) - 1.0) + 1.0;
    case 1: return s / L + std::log(L) - 1.0;
    default: return 1.0 / L;
    }
}

double beta(double s, double L)
{
    return std::min(s, L);
}

double regularized_family(double s, double L, double delta, int order)
{
    require_delta(L, delta);
    if (order < 0 || order > 2) fail(ErrorKind::InvalidParameter, "regularized_family: order must be 0, 1 or 2");
    if (s <= delta) {
        switch (order) {
        case 0: return (s * s - delta * delta) / (2.0 * delta) + s * (std::log(delta) - 1.0) + 1.0;
        case 1: return s / delta + std::log(delta) - 1.0;
        default: return 1.0 / delta;
        }
    }
    return entropy_family(s, L, order);
}

double beta_delta(double s, double L, double delta)
{
    require_delta(L, delta);
    return std::max(std::min(s, L), delta);
}

double G_delta(double s, double L, double delta, int order)
{
    require_delta(L, delta);
    if (order == 1) return s / beta_delta(s, L, delta);
    if (order != 0) fail(ErrorKind::InvalidParameter, "G_delta: order must be 0 or 1");
    if (s <= delta) return s * s / (2.0 * delta) + 0.5 * (delta - L);
    if (s <= L) return s - 0.5 * L;
    return s * s / (2.0 * L);
}

double G_L(double s, double L, int order)
{
    if (!(L > 1.0)) fail(ErrorKind::InvalidParameter, "L must be > 1");
    if (order == 1) return s <= L ? 1.0 : s / L;
    if (order != 0) fail(ErrorKind::InvalidParameter, "G_L: order must be 0 or 1");
    return s <= L ? s - 0.5 * L : s * s / (2.0 * L);
}

double log_young_residual(double r, double s)
{
    require_nonnegative(r, "log_young_residual");
    const double rlogr = r > 0.0 ? r * std::log(r) : 0.0;
    return rlogr - r + std::exp(s) - r * s;
}

double ScalarFamily::operator()(double s, int order) const
{
    switch (kind) {
    case FamilyKind::F:
        if (order == 0) return entropy_F(s);
        require_nonnegative(s, "F");
        if (s == 0.0) fail(ErrorKind::Pole, "F: derivative has a pole at s = 0");
        if (order == 1) return std::log(s);
        if (order == 2) return 1.0 / s;
        break;
    case FamilyKind::FL: return entropy_family(s, L, order);
    case FamilyKind::FLDelta: return regularized_family(s, L, delta, order);
    case FamilyKind::BetaL:
        if (order == 0) return beta(s, L);
        if (order == 1) return s < L ? 1.0 : 0.0;
        break;
    case FamilyKind::BetaLDelta:
        if (order == 0) return beta_delta(s, L, delta);
        if (order == 1) return (s > delta && s < L) ? 1.0 : 0.0;
        break;
    case FamilyKind::GLDelta: return G_delta(s, L, delta, order);
    case FamilyKind::GL: return G_L(s, L, order);
    }
    fail(ErrorKind::InvalidParameter, "ScalarFamily: unsupported order");
}

} // namespace polykinetic
