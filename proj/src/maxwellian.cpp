#include "polykinetic/maxwellian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

constexpr double kTailExponent = 50.0;
constexpr int kFineSubintervals = 24;
constexpr int kFinePoints = 16;

double sphere_area(int d)
{
    return d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

struct RadialMeasure {
    std::vector<double> r;
    std::vector<double> w;  // r^(d-1) exp(-U(r^2/2)) dr, unnormalized
};

// Composite Gauss-Legendre in r on [0, r_inf] and [r_inf, r_max]; the weight is smooth on each piece.
RadialMeasure fine_radial(const PotentialSpec& spec, int d, double s_max, int sub, int pts)
{
    const auto gl = gauss_legendre(pts);
    const double r_max = std::sqrt(2.0 * s_max);
    const double r_inf = std::sqrt(2.0 * spec.s_inf);
    std::vector<std::pair<double, double>> panels;
    if (r_inf < r_max) {
        panels.push_back({0.0, r_inf});
        panels.push_back({r_inf, r_max});
    } else {
        panels.push_back({0.0, r_max});
    }
    RadialMeasure m;
    for (auto [a, b] : panels) {
        const double h = (b - a) / sub;
        for (int j = 0; j < sub; ++j) {
            const double lo = a + j * h;
            for (int i = 0; i < pts; ++i) {
                const double r = lo + 0.5 * h * (gl.nodes[i] + 1.0);
                const double s = 0.5 * r * r;
                const double w = 0.5 * h * gl.weights[i] * std::pow(r, d - 1) * std::exp(-potential(s, spec, 0));
                m.r.push_back(r);
                m.w.push_back(w);
            }
        }
    }
    return m;
}

} // namespace

double potential(double s, const PotentialSpec& spec, int order)
{
    if (!(s >= 0.0)) {
        std::ostringstream os;
        os << "potential: s must be >= 0 (got " << s << ")";
        fail(ErrorKind::Domain, os.str());
    }
    const double si = spec.s_inf;
    const double th = spec.theta;
    if (s <= si) {
        switch (order) {
        case 0: return s;
        case 1: return 1.0;
        case 2: return 0.0;
        default: break;
        }
    } else {
        const double x = s / si;
        switch (order) {
        case 0: return (si / th) * (std::pow(x, th) + (th - 1.0));
        case 1: return std::pow(x, th - 1.0);
        case 2: return ((th - 1.0) / si) * std::pow(x, th - 2.0);
        default: break;
        }
    }
    fail(ErrorKind::InvalidParameter, "potential: order must be 0, 1 or 2");
}

double truncation_level(const PotentialSpec& spec)
{
    if (spec.s_inf >= kTailExponent) return kTailExponent;
    const double th = spec.theta;
    const double si = spec.s_inf;
    return si * std::pow(kTailExponent * th / si - th + 1.0, 1.0 / th);
}

GaussRule1D gauss_legendre(int n)
{
    Recurrence rec;
    rec.alpha.assign(n, 0.0);
    rec.beta.resize(n);
    rec.beta[0] = 2.0;
    for (int k = 1; k < n; ++k) rec.beta[k] = double(k) * k / (4.0 * k * k - 1.0);
    return golub_welsch(rec, n);
}

Recurrence stieltjes(std::span<const double> x, std::span<const double> w, int n)
{
    const std::size_t m = x.size();
    if (n < 1 || m < static_cast<std::size_t>(n))
        fail(ErrorKind::Resolution, "stieltjes: discrete measure has fewer points than requested nodes");
    double mass = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        mass += w[j];
        scale = std::max(scale, std::abs(x[j]));
    }
    if (!(mass > 0.0)) fail(ErrorKind::Resolution, "stieltjes: measure has no mass");
    Recurrence rec;
    rec.alpha.resize(n);
    rec.beta.resize(n);
    rec.beta[0] = mass;
    std::vector<std::vector<double>> P;
    std::vector<double> p(m, 1.0 / std::sqrt(mass)), prev(m, 0.0), q(m);
    for (int k = 0; k < n; ++k) {
        P.push_back(p);
        double a = 0.0;
        for (std::size_t j = 0; j < m; ++j) a += w[j] * x[j] * p[j] * p[j];
        rec.alpha[k] = a;
        if (k + 1 == n) break;
        const double sb = k == 0 ? 0.0 : std::sqrt(rec.beta[k]);
        for (std::size_t j = 0; j < m; ++j) q[j] = (x[j] - a) * p[j] - sb * prev[j];
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& pj : P) {
                double c = 0.0;
                for (std::size_t j = 0; j < m; ++j) c += w[j] * q[j] * pj[j];
                for (std::size_t j = 0; j < m; ++j) q[j] -= c * pj[j];
            }
        }
        double b = 0.0;
        for (std::size_t j = 0; j < m; ++j) b += w[j] * q[j] * q[j];
        if (!(b > 1e-26 * scale * scale) || !std::isfinite(b)) {
            std::ostringstream os;
            os << "stieltjes: recurrence coefficient beta_" << k + 1
               << " is not positive (moment matrix lost positive-definiteness)";
            fail(ErrorKind::Resolution, os.str());
        }
        rec.beta[k + 1] = b;
        const double inv = 1.0 / std::sqrt(b);
        prev = p;
        for (std::size_t j = 0; j < m; ++j) p[j] = q[j] * inv;
    }
    return rec;
}

GaussRule1D golub_welsch(const Recurrence& rec, int n)
{
    if (n < 1 || static_cast<std::size_t>(n) > rec.alpha.size())
        fail(ErrorKind::Resolution, "golub_welsch: not enough recurrence coefficients");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        J(k, k) = rec.alpha[k];
        if (k + 1 < n) {
            J(k, k + 1) = std::sqrt(rec.beta[k + 1]);
            J(k + 1, k) = J(k, k + 1);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    GaussRule1D g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        g.nodes[j] = eig.eigenvalues()(j);
        const double v = eig.eigenvectors()(0, j);
        g.weights[j] = rec.beta[0] * v * v;
    }
    return g;
}

QuadratureResolution default_quadrature_resolution(int degree, int dim)
{
    QuadratureResolution r;
    r.radial_per_panel = (degree + 2) / 2 + 3;
    r.angular = dim == 2 ? 2 * degree + 2 : degree + 1;
    return r;
}

QuadratureRule build_quadrature(const PotentialSpec& spec, int dim, const QuadratureResolution& res)
{
    if (dim != 2 && dim != 3) fail(ErrorKind::InvalidParameter, "build_quadrature: dim must be 2 or 3");
    if (res.radial_per_panel < 1) fail(ErrorKind::Resolution, "build_quadrature: radial_per_panel must be >= 1");
    if (res.angular < (dim == 2 ? 4 : 2)) fail(ErrorKind::Resolution, "build_quadrature: too few angular nodes");

    const double s_max = truncation_level(spec);
    const auto fine = fine_radial(spec, dim, s_max, kFineSubintervals, kFinePoints);

    // Radial Gauss nodes in s, one Stieltjes procedure per panel.
    std::vector<double> s_nodes, s_weights;
    const bool split = spec.s_inf < s_max;
    for (int panel = 0; panel < (split ? 2 : 1); ++panel) {
        std::vector<double> xs, ws;
        for (std::size_t j = 0; j < fine.r.size(); ++j) {
            const double s = 0.5 * fine.r[j] * fine.r[j];
            const bool in_first = s <= spec.s_inf;
            if (!split || (panel == 0) == in_first) {
                xs.push_back(s);
                ws.push_back(fine.w[j]);
            }
        }
        const auto rec = stieltjes(xs, ws, res.radial_per_panel);
        const auto g = golub_welsch(rec, res.radial_per_panel);
        s_nodes.insert(s_nodes.end(), g.nodes.begin(), g.nodes.end());
        s_weights.insert(s_weights.end(), g.weights.begin(), g.weights.end());
    }

    // Angular rule: directions and weights summing to the sphere area.
    std::vector<double> dirs, dir_w;
    if (dim == 2) {
        const int m = res.angular;
        for (int j = 0; j < m; ++j) {
            const double th = 2.0 * std::numbers::pi * (j + 0.5) / m;
            dirs.push_back(std::cos(th));
            dirs.push_back(std::sin(th));
            dir_w.push_back(2.0 * std::numbers::pi / m);
        }
    } else {
        const int m = res.angular;
        const auto gl = gauss_legendre(m);
        const int mp = 2 * m;
        for (int a = 0; a < m; ++a) {
            const double mu = gl.nodes[a];
            const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int b = 0; b < mp; ++b) {
                const double ph = 2.0 * std::numbers::pi * (b + 0.5) / mp;
                dirs.push_back(st * std::cos(ph));
                dirs.push_back(st * std::sin(ph));
                dirs.push_back(mu);
                dir_w.push_back(gl.weights[a] * 2.0 * std::numbers::pi / mp);
            }
        }
    }

    QuadratureRule rule;
    rule.dim = dim;
    rule.truncation_s = s_max;
    rule.truncation_radius = std::sqrt(2.0 * s_max);
    rule.radial_nodes = static_cast<int>(s_nodes.size());
    rule.angular_nodes = static_cast<int>(dir_w.size());
    const int radial_exact = 4 * res.radial_per_panel - 1;
    const int angular_exact = dim == 2 ? res.angular - 1 : 2 * res.angular - 1;
    rule.exactness_degree = std::min(radial_exact, angular_exact);

    double total = 0.0;
    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
        const double r = std::sqrt(2.0 * s_nodes[i]);
        for (std::size_t a = 0; a < dir_w.size(); ++a) {
            for (int c = 0; c < dim; ++c) rule.points.push_back(r * dirs[a * dim + c]);
            rule.s.push_back(s_nodes[i]);
            const double w = s_weights[i] * dir_w[a];
            if (!(w > 0.0)) fail(ErrorKind::Resolution, "build_quadrature: non-positive weight");
            rule.weights.push_back(w);
            total += w;
        }
    }
    for (auto& w : rule.weights) w /= total;
    return rule;
}

MaxwellianModel::MaxwellianModel(const PotentialSpec& spec, int springs, int dim, const QuadratureResolution& res)
    : spec_(spec), K_(springs), d_(dim)
{
    if (!(spec.theta > 1.0)) fail(ErrorKind::InvalidParameter, "theta must exceed 1");
    if (!(spec.s_inf > 0.0)) fail(ErrorKind::InvalidParameter, "s_inf must be > 0");
    if (springs < 1) fail(ErrorKind::InvalidParameter, "K must be >= 1");
    s_max_ = truncation_level(spec);
    rule_ = build_quadrature(spec, dim, res);
    const auto fine = fine_radial(spec, dim, s_max_, kFineSubintervals, kFinePoints);
    double mass = 0.0;
    for (double w : fine.w) mass += w;
    Z_ = sphere_area(dim) * mass;
    fine_r_ = fine.r;
    fine_w_ = fine.w;
    for (auto& w : fine_w_) w /= mass;
}

double MaxwellianModel::tail_constant() const
{
    return std::exp(-spec_.s_inf * (spec_.theta - 1.0) / spec_.theta) / Z_;
}

double MaxwellianModel::spring_density(std::span<const double> qi) const
{
    if (!(Z_ > 0.0)) fail(ErrorKind::State, "maxwellian: model is not normalized");
    double s = 0.0;
    for (double v : qi) s += v * v;
    return std::exp(-potential(0.5 * s, spec_, 0)) / Z_;
}

double MaxwellianModel::density(std::span<const double> q) const
{
    if (q.size() != static_cast<std::size_t>(K_ * d_))
        fail(ErrorKind::InvalidParameter, "maxwellian_density: configuration has wrong length");
    double m = 1.0;
    for (int i = 0; i < K_; ++i) m *= spring_density(q.subspan(i * d_, d_));
    return m;
}

double MaxwellianModel::radial_expectation(const std::function<double(double)>& g, double truncation_scale) const
{
    if (truncation_scale == 1.0) {
        double acc = 0.0;
        for (std::size_t j = 0; j < fine_r_.size(); ++j) acc += fine_w_[j] * g(0.5 * fine_r_[j] * fine_r_[j]);
        return acc;
    }
    const auto fine = fine_radial(spec_, d_, s_max_ * truncation_scale, kFineSubintervals, kFinePoints);
    double acc = 0.0, mass = 0.0;
    for (std::size_t j = 0; j < fine.r.size(); ++j) {
        acc += fine.w[j] * g(0.5 * fine.r[j] * fine.r[j]);
        mass += fine.w[j];
    }
    return acc / mass;
}

namespace {

double tensor_power_moment(const std::vector<double>& r, const std::vector<double>& w, int K, int p)
{
    // Recursion over springs accumulating |q|^2 = sum_i r_i^2.
    std::function<double(int, double)> rec = [&](int level, double sumsq) -> double {
        if (level == K) return std::pow(1.0 + std::sqrt(sumsq), p);
        double acc = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) acc += w[j] * rec(level + 1, sumsq + r[j] * r[j]);
        return acc;
    };
    return rec(0, 0.0);
}

} // namespace

double MaxwellianModel::moment_power(int p) const
{
    if (p < 0) fail(ErrorKind::InvalidParameter, "moment: power must be >= 0");
    if (p == 0) return 1.0;
    auto evaluate = [&](int sub, int pts) {
        const auto fine = fine_radial(spec_, d_, s_max_, sub, pts);
        double mass = 0.0;
        for (double w : fine.w) mass += w;
        std::vector<double> w(fine.w);
        for (auto& v : w) v /= mass;
        return tensor_power_moment(fine.r, w, K_, p);
    };
    const int sub = K_ <= 1 ? kFineSubintervals : (K_ == 2 ? 12 : 4);
    const int pts = K_ <= 2 ? kFinePoints : 10;
    const double a = evaluate(sub, pts);
    const double b = evaluate(sub + sub / 2, pts);
    if (std::abs(a - b) > 1e-10 * std::abs(b)) {
        std::ostringstream os;
        os << "moment: truncation/resolution residual " << std::abs(a - b) / std::abs(b) << " exceeds 1e-10";
        fail(ErrorKind::Accuracy, os.str());
    }
    return b;
}

double MaxwellianModel::theta_moment() const
{
    const double th = spec_.theta;
    return radial_expectation([th](double s) { return std::pow(s, th); });
}

double MaxwellianModel::second_moment() const
{
    return K_ * radial_expectation([](double s) { return 2.0 * s; });
}

double MaxwellianModel::force_moment() const
{
    const auto spec = spec_;
    return radial_expectation([spec](double s) {
        const double u1 = potential(s, spec, 1);
        return u1 * u1 * 4.0 * s * s;
    });
}

double MaxwellianModel::exp_moment(double c1) const
{
    const auto spec = spec_;
    const double th = spec.theta;
    return radial_expectation([=](double s) { return std::exp(0.5 * c1 * std::pow(s, th)); });
}

double MaxwellianModel::bakry_emery_modulus() const
{
    double kappa = 1.0;  // U'(0) at the origin
    for (double s : rule_.s) {
        const double u1 = potential(s, spec_, 1);
        const double u2 = potential(s, spec_, 2);
        kappa = std::min(kappa, std::min(u1, u1 + 2.0 * s * u2));
    }
    if (!(kappa > 0.0)) fail(ErrorKind::Model, "bakry_emery_modulus: non-convex sample detected");
    return kappa;
}

double bakry_emery_modulus(const PotentialSpec& spec)
{
    if (!(spec.theta >= 1.0)) fail(ErrorKind::InvalidParameter, "theta must be >= 1");
    const double s_max = truncation_level(spec);
    double kappa = 1.0;
    const int n = 4000;
    for (int j = 0; j <= n; ++j) {
        const double s = s_max * j / n;
        const double u1 = potential(s, spec, 1);
        const double u2 = potential(s, spec, 2);
        kappa = std::min(kappa, std::min(u1, u1 + 2.0 * s * u2));
    }
    if (!(kappa > 0.0)) fail(ErrorKind::Model, "bakry_emery_modulus: non-convex sample detected");
    return kappa;
}

} // namespace polykinetic
