#include "polykinetic/q_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polykinetic/errors.hpp"
#include "polykinetic/kernels.hpp"

namespace polykinetic {

DenseMatrix::DenseMatrix(const Eigen::MatrixXd& m)
    : rows(static_cast<int>(m.rows())), cols(static_cast<int>(m.cols())), a(m.size()), at(m.size())
{
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            a[static_cast<std::size_t>(i) * cols + j] = m(i, j);
            at[static_cast<std::size_t>(j) * rows + i] = m(i, j);
        }
}

Eigen::MatrixXd DenseMatrix::to_eigen() const
{
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j);
    return m;
}

namespace {

std::vector<std::array<int, 3>> graded_exponents(int d, int P)
{
    std::vector<std::array<int, 3>> out;
    for (int deg = 0; deg <= P; ++deg) {
        if (d == 2) {
            for (int a = deg; a >= 0; --a) out.push_back({a, deg - a, 0});
        } else {
            for (int a = deg; a >= 0; --a)
                for (int b = deg - a; b >= 0; --b) out.push_back({a, b, deg - a - b});
        }
    }
    return out;
}

DenseMatrix scaled(const DenseMatrix& m, double s)
{
    DenseMatrix r = m;
    for (auto& v : r.a) v *= s;
    for (auto& v : r.at) v *= s;
    return r;
}

} // namespace

QSpace::QSpace(const MaxwellianModel& model, int degree)
    : model_(&model), K_(model.springs()), d_(model.dim()), P_(degree)
{
    if (degree < 0) fail(ErrorKind::InvalidParameter, "QSpace: degree must be >= 0");
    const QuadratureRule& rule = model.rule();
    if (rule.exactness_degree < 2 * degree + 1) {
        std::ostringstream os;
        os << "QSpace: quadrature exactness " << rule.exactness_degree << " is below 2P+1 = " << 2 * degree + 1;
        fail(ErrorKind::Resolution, os.str());
    }
    exponents_ = graded_exponents(d_, P_);
    ns_ = static_cast<int>(exponents_.size());
    nn_ = static_cast<int>(rule.size());
    nq_ = 1;
    nn_total_ = 1;
    for (int i = 0; i < K_; ++i) {
        nq_ *= ns_;
        nn_total_ *= nn_;
    }

    // 1D polynomials orthonormal under the coordinate marginal of M_i.
    {
        std::vector<double> x(nn_), w(nn_);
        for (int j = 0; j < nn_; ++j) {
            x[j] = rule.point(j)[0];
            w[j] = rule.weights[j];
        }
        marginal_ = stieltjes(x, w, P_ + 1);
    }

    // Start functions at the nodes, then graded Cholesky orthonormalization (two passes).
    Eigen::MatrixXd Tn(nn_, ns_);
    std::vector<Eigen::MatrixXd> dTn(d_, Eigen::MatrixXd(nn_, ns_));
    std::vector<double> t(ns_), dt(static_cast<std::size_t>(ns_) * d_);
    for (int j = 0; j < nn_; ++j) {
        eval_start(std::span<const double>(rule.point(j), d_), t.data(), dt.data());
        for (int l = 0; l < ns_; ++l) {
            Tn(j, l) = t[l];
            for (int c = 0; c < d_; ++c) dTn[c](j, l) = dt[static_cast<std::size_t>(l) * d_ + c];
        }
    }
    Eigen::VectorXd w(nn_);
    for (int j = 0; j < nn_; ++j) w(j) = rule.weights[j];

    coeff_ = Eigen::MatrixXd::Identity(ns_, ns_);
    for (int pass = 0; pass < 2; ++pass) {
        Eigen::MatrixXd Phi = Tn * coeff_.transpose();
        Eigen::MatrixXd G = Phi.transpose() * w.asDiagonal() * Phi;
        G = 0.5 * (G + G.transpose());
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        if (llt.info() != Eigen::Success)
            fail(ErrorKind::Resolution, "QSpace: Gram matrix is not positive definite");
        Eigen::MatrixXd L = llt.matrixL();
        const double dmin = L.diagonal().minCoeff();
        const double dmax = L.diagonal().maxCoeff();
        if (!(dmin > 1e-7 * dmax)) fail(ErrorKind::Resolution, "QSpace: Gram matrix is ill-conditioned");
        Eigen::MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(ns_, ns_));
        coeff_ = Linv * coeff_;
    }

    Eigen::MatrixXd V = Tn * coeff_.transpose();
    std::vector<Eigen::MatrixXd> Gq(d_);
    for (int c = 0; c < d_; ++c) Gq[c] = dTn[c] * coeff_.transpose();
    {
        Eigen::MatrixXd G = V.transpose() * w.asDiagonal() * V;
        gram_error_ = (G - Eigen::MatrixXd::Identity(ns_, ns_)).cwiseAbs().maxCoeff();
    }

    V_ = DenseMatrix(V);
    VW_ = DenseMatrix((w.asDiagonal() * V).transpose());
    for (int c = 0; c < d_; ++c) {
        G_.emplace_back(Gq[c]);
        GW_.emplace_back((w.asDiagonal() * Gq[c]).transpose());
    }

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(ns_, ns_);
    for (int c = 0; c < d_; ++c) S += Gq[c].transpose() * w.asDiagonal() * Gq[c];
    S = 0.5 * (S + S.transpose());
    S.row(0).setZero();
    S.col(0).setZero();
    S_ = DenseMatrix(S);

    // Eigenbasis of S with phi_0 kept exactly as the null vector.
    {
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(ns_, ns_);
        Q(0, 0) = 1.0;
        lam_.assign(ns_, 0.0);
        if (ns_ > 1) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S.bottomRightCorner(ns_ - 1, ns_ - 1));
            Q.bottomRightCorner(ns_ - 1, ns_ - 1) = eig.eigenvectors();
            for (int m = 1; m < ns_; ++m) lam_[m] = eig.eigenvalues()(m - 1);
        }
        Q_ = DenseMatrix(Q);
        Qt_ = DenseMatrix(Q.transpose());
    }

    for (int c = 0; c < d_; ++c) {
        Eigen::MatrixXd E = V.transpose() * w.asDiagonal() * Gq[c];
        E_.emplace_back(E);
        Et_.emplace_back(E.transpose());
    }

    Eigen::VectorXd up(nn_);
    for (int j = 0; j < nn_; ++j) up(j) = potential(rule.s[j], model.potential_spec(), 1);
    for (int a = 0; a < d_; ++a)
        for (int b = 0; b < d_; ++b) {
            Eigen::VectorXd qb(nn_);
            for (int j = 0; j < nn_; ++j) qb(j) = rule.point(j)[b];
            // T[k][l] = sum_j w q_b d_a phi_k phi_l
            Eigen::MatrixXd Tab = Gq[a].transpose() * (w.cwiseProduct(qb)).asDiagonal() * V;
            T_.emplace_back(Tab);
        }
    {
        Eigen::MatrixXd W(ns_, d_ * d_ * ns_);
        for (int ab = 0; ab < d_ * d_; ++ab) W.block(0, ab * ns_, ns_, ns_) = T_[ab].to_eigen().transpose();
        drag_stack_ = DenseMatrix(W);
    }
    {
        Eigen::MatrixXd mom(ns_, d_ * d_);
        for (int a = 0; a < d_; ++a)
            for (int b = 0; b < d_; ++b) {
                Eigen::VectorXd f(nn_);
                for (int j = 0; j < nn_; ++j) f(j) = w(j) * up(j) * rule.point(j)[a] * rule.point(j)[b];
                mom.col(a * d_ + b) = V.transpose() * f;
            }
        mom_ = DenseMatrix(mom);
        theta_mom_.resize(ns_);
        const double th = model.potential_spec().theta;
        for (int l = 0; l < ns_; ++l) {
            double acc = 0.0;
            for (int j = 0; j < nn_; ++j) acc += w(j) * V(j, l) * std::pow(rule.s[j], th);
            theta_mom_[l] = acc;
        }
    }
}

void QSpace::eval_start(std::span<const double> q, double* t, double* dt) const
{
    // 1D orthonormal polynomials and derivatives per coordinate.
    const int n = P_ + 1;
    std::vector<double> p(static_cast<std::size_t>(d_) * n), dp(static_cast<std::size_t>(d_) * n);
    for (int c = 0; c < d_; ++c) {
        const double x = q[c];
        double* pc = p.data() + c * n;
        double* dc = dp.data() + c * n;
        pc[0] = 1.0 / std::sqrt(marginal_.beta[0]);
        dc[0] = 0.0;
        for (int k = 0; k + 1 < n; ++k) {
            const double sb1 = std::sqrt(marginal_.beta[k + 1]);
            const double sb = k > 0 ? std::sqrt(marginal_.beta[k]) : 0.0;
            const double pm = k > 0 ? pc[k - 1] : 0.0;
            const double dm = k > 0 ? dc[k - 1] : 0.0;
            pc[k + 1] = ((x - marginal_.alpha[k]) * pc[k] - sb * pm) / sb1;
            dc[k + 1] = (pc[k] + (x - marginal_.alpha[k]) * dc[k] - sb * dm) / sb1;
        }
    }
    for (int l = 0; l < ns_; ++l) {
        const auto& e = exponents_[l];
        double v = 1.0;
        for (int c = 0; c < d_; ++c) v *= p[c * n + e[c]];
        t[l] = v;
        if (dt) {
            for (int c = 0; c < d_; ++c) {
                double g = dp[c * n + e[c]];
                for (int c2 = 0; c2 < d_; ++c2)
                    if (c2 != c) g *= p[c2 * n + e[c2]];
                dt[static_cast<std::size_t>(l) * d_ + c] = g;
            }
        }
    }
}

void QSpace::evaluate_spring(std::span<const double> q, double* values, double* grads) const
{
    std::vector<double> t(ns_), dt(static_cast<std::size_t>(ns_) * d_);
    eval_start(q, t.data(), dt.data());
    for (int k = 0; k < ns_; ++k) {
        double v = 0.0;
        for (int l = 0; l <= k; ++l) v += coeff_(k, l) * t[l];
        values[k] = v;
        if (grads)
            for (int c = 0; c < d_; ++c) {
                double g = 0.0;
                for (int l = 0; l <= k; ++l) g += coeff_(k, l) * dt[static_cast<std::size_t>(l) * d_ + c];
                grads[static_cast<std::size_t>(k) * d_ + c] = g;
            }
    }
}

void QSpace::evaluate(std::span<const double> q, double* values) const
{
    std::vector<double> vs(static_cast<std::size_t>(K_) * ns_);
    for (int i = 0; i < K_; ++i) evaluate_spring(q.subspan(i * d_, d_), vs.data() + i * ns_, nullptr);
    for (std::size_t f = 0; f < nq_; ++f) {
        std::size_t rem = f;
        double v = 1.0;
        for (int i = K_ - 1; i >= 0; --i) {
            v *= vs[i * ns_ + rem % ns_];
            rem /= ns_;
        }
        values[f] = v;
    }
}

int QSpace::index_of(std::array<int, 3> exps) const
{
    if (d_ == 2) exps[2] = 0;
    for (int l = 0; l < ns_; ++l)
        if (exponents_[l] == exps) return l;
    return -1;
}

int QSpace::total_degree(int l) const
{
    return exponents_[l][0] + exponents_[l][1] + exponents_[l][2];
}

std::vector<int> QSpace::multi_index(std::size_t flat) const
{
    std::vector<int> idx(K_);
    for (int i = K_ - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(flat % ns_);
        flat /= ns_;
    }
    return idx;
}

std::size_t QSpace::flat_index(std::span<const int> per_spring) const
{
    std::size_t f = 0;
    for (int i = 0; i < K_; ++i) f = f * ns_ + per_spring[i];
    return f;
}

std::vector<int> QSpace::node_multi_index(std::size_t flat) const
{
    std::vector<int> idx(K_);
    for (int i = K_ - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(flat % nn_);
        flat /= nn_;
    }
    return idx;
}

double QSpace::node_weight(std::size_t flat) const
{
    double w = 1.0;
    for (int i = K_ - 1; i >= 0; --i) {
        w *= rule().weights[flat % nn_];
        flat /= nn_;
    }
    return w;
}

RealVector QSpace::kron_eigenvalues(std::span<const double> weight) const
{
    RealVector out(nq_);
    for (std::size_t f = 0; f < nq_; ++f) {
        std::size_t rem = f;
        double s = 0.0;
        for (int i = K_ - 1; i >= 0; --i) {
            s += weight[i] * lam_[rem % ns_];
            rem /= ns_;
        }
        out[f] = s;
    }
    return out;
}

void QSpace::mode_apply(const DenseMatrix& B, int axis, const double* in, double* out, std::size_t nx,
                        std::vector<int>& dims, bool accumulate) const
{
    std::size_t pre = nx, post = 1;
    for (int j = 0; j < axis; ++j) pre *= dims[j];
    for (int j = axis + 1; j < K_; ++j) post *= dims[j];
    const std::size_t nin = dims[axis];
    const std::size_t nout = B.rows;
    if (post == 1) {
        kernels::gemm(pre, nout, nin, in, nin, B.at.data(), nout, out, nout, accumulate);
    } else {
        for (std::size_t p = 0; p < pre; ++p)
            kernels::gemm(nout, post, nin, B.a.data(), nin, in + p * nin * post, post, out + p * nout * post, post,
                          accumulate);
    }
    dims[axis] = static_cast<int>(nout);
}

void QSpace::kron_apply(const std::vector<const DenseMatrix*>& mats, const double* in, double* out, std::size_t nx,
                        bool accumulate) const
{
    std::vector<int> dims(K_);
    for (int i = 0; i < K_; ++i) dims[i] = mats[i] ? mats[i]->cols : ns_;
    std::vector<int> active;
    for (int i = 0; i < K_; ++i)
        if (mats[i]) active.push_back(i);
    std::size_t in_size = nx;
    for (int v : dims) in_size *= v;
    if (active.empty()) {
        if (accumulate)
            for (std::size_t j = 0; j < in_size; ++j) out[j] += in[j];
        else
            std::copy(in, in + in_size, out);
        return;
    }
    RealVector a, b;
    const double* src = in;
    for (std::size_t step = 0; step < active.size(); ++step) {
        const int axis = active[step];
        const bool last = step + 1 == active.size();
        std::size_t out_size = nx;
        for (int i = 0; i < K_; ++i) out_size *= (i == axis ? mats[axis]->rows : dims[i]);
        double* dst;
        if (last) {
            dst = out;
        } else {
            RealVector& buf = (step % 2 == 0) ? a : b;
            buf.assign(out_size, 0.0);
            dst = buf.data();
        }
        mode_apply(*mats[axis], axis, src, dst, nx, dims, last && accumulate);
        src = dst;
    }
}

void QSpace::apply_diffusion(const Eigen::MatrixXd& A, double scale, const double* in, double* out, std::size_t nx,
                             bool accumulate) const
{
    bool first = true;
    std::vector<const DenseMatrix*> mats(K_, nullptr);
    for (int i = 0; i < K_; ++i) {
        if (A(i, i) == 0.0) continue;
        DenseMatrix s = scaled(S_, scale * A(i, i));
        std::fill(mats.begin(), mats.end(), nullptr);
        mats[i] = &s;
        kron_apply(mats, in, out, nx, accumulate || !first);
        first = false;
    }
    for (int i = 0; i < K_; ++i)
        for (int j = 0; j < K_; ++j) {
            if (i == j || A(i, j) == 0.0) continue;
            for (int c = 0; c < d_; ++c) {
                DenseMatrix e = scaled(E_[c], scale * A(i, j));
                std::fill(mats.begin(), mats.end(), nullptr);
                mats[j] = &e;
                mats[i] = &Et_[c];
                kron_apply(mats, in, out, nx, accumulate || !first);
                first = false;
            }
        }
    if (first && !accumulate) std::fill(out, out + nx * nq_, 0.0);
}

void QSpace::apply_drag(const double* sigma, double scale, const double* in, double* out, std::size_t nx,
                        bool accumulate) const
{
    const int dd = d_ * d_;
    if (!accumulate) std::fill(out, out + nx * nq_, 0.0);
    RealVector sig(sigma, sigma + nx * dd);
    for (auto& v : sig) v *= scale;
    if (K_ == 1) {
        const std::size_t width = static_cast<std::size_t>(dd) * ns_;
        RealVector z(nx * width);
        kernels::gemm(nx, width, ns_, in, ns_, drag_stack_.a.data(), width, z.data(), width, false);
        for (int ab = 0; ab < dd; ++ab)
            kernels::row_scaled_add(nx, ns_, sig.data() + ab, dd, z.data() + ab * ns_, width, out, ns_);
        return;
    }
    RealVector z(nx * nq_);
    std::vector<const DenseMatrix*> mats(K_, nullptr);
    for (int i = 0; i < K_; ++i)
        for (int ab = 0; ab < dd; ++ab) {
            std::fill(mats.begin(), mats.end(), nullptr);
            mats[i] = &T_[ab];
            kron_apply(mats, in, z.data(), nx, false);
            kernels::row_scaled_add(nx, nq_, sig.data() + ab, dd, z.data(), nq_, out, nq_);
        }
}

void QSpace::rotate_to_eigen(const double* in, double* out, std::size_t nx) const
{
    std::vector<const DenseMatrix*> mats(K_, &Qt_);
    kron_apply(mats, in, out, nx, false);
}

void QSpace::rotate_from_eigen(const double* in, double* out, std::size_t nx) const
{
    std::vector<const DenseMatrix*> mats(K_, &Q_);
    kron_apply(mats, in, out, nx, false);
}

void QSpace::evaluate_nodes(const double* in, double* out, std::size_t nx) const
{
    std::vector<const DenseMatrix*> mats(K_, &V_);
    kron_apply(mats, in, out, nx, false);
}

void QSpace::evaluate_node_gradient(int spring, int c, const double* in, double* out, std::size_t nx) const
{
    std::vector<const DenseMatrix*> mats(K_, &V_);
    mats[spring] = &G_[c];
    kron_apply(mats, in, out, nx, false);
}

void QSpace::project_nodes(const double* nodal, double* out, std::size_t nx, bool accumulate) const
{
    std::vector<const DenseMatrix*> mats(K_, &VW_);
    kron_apply(mats, nodal, out, nx, accumulate);
}

void QSpace::project_node_gradient(int spring, int c, const double* nodal, double* out, std::size_t nx,
                                   bool accumulate) const
{
    std::vector<const DenseMatrix*> mats(K_, &VW_);
    mats[spring] = &GW_[c];
    kron_apply(mats, nodal, out, nx, accumulate);
}

void QSpace::kramers(int spring, const double* in, double* out, std::size_t nx) const
{
    const int dd = d_ * d_;
    if (K_ == 1) {
        kernels::gemm(nx, dd, ns_, in, ns_, mom_.a.data(), dd, out, dd, false);
        return;
    }
    std::size_t stride = 1;
    for (int j = spring + 1; j < K_; ++j) stride *= ns_;
    for (std::size_t x = 0; x < nx; ++x) {
        double* o = out + x * dd;
        std::fill(o, o + dd, 0.0);
        for (int l = 0; l < ns_; ++l) {
            const double c = in[x * nq_ + l * stride];
            for (int ab = 0; ab < dd; ++ab) o[ab] += c * mom_(l, ab);
        }
    }
}

void QSpace::theta_moment(int spring, const double* in, double* out, std::size_t nx) const
{
    std::size_t stride = 1;
    for (int j = spring + 1; j < K_; ++j) stride *= ns_;
    for (std::size_t x = 0; x < nx; ++x) {
        double acc = 0.0;
        for (int l = 0; l < ns_; ++l) acc += in[x * nq_ + l * stride] * theta_mom_[l];
        out[x] = acc;
    }
}

} // namespace polykinetic
