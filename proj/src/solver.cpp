#include "kfp/solver.hpp"

#include <numbers>

namespace kfp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

BlockPreconditioner::BlockPreconditioner(const SparseOperator& op) : basis_(op.basis) {
    const int d = basis_->dim();
    const long nc = basis_->n_count();
    const auto& vidx = basis_->velocity_indices();
    lu_.reserve(basis_->k_count());
    Eigen::MatrixXcd block(nc, nc);
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        const MIdx k = basis_->k_of(kf);
        block.setZero();
        for (long p = 0; p < nc; ++p) {
            const MIdx& n = vidx[p];
            for (int j = 0; j < d; ++j) {
                if (n[j] > 0) {
                    const MIdx nm = n.plus(j, -1);
                    for (int i = 0; i < d; ++i) {
                        double am = op.a_mean(i, j);
                        if (am == 0.0) continue;
                        block(basis_->v_pos(nm.plus(i, 1)), p) +=
                            am * std::sqrt(static_cast<double>(n[j]) * (n[i] + 1 - (i == j ? 1 : 0)));
                    }
                }
                if (k[j] != 0) {
                    const cplx factor(0.0, -kTwoPi * k[j]);
                    if (n[j] > 0)
                        block(basis_->v_pos(n.plus(j, -1)), p) += factor * std::sqrt(static_cast<double>(n[j]));
                    long up = basis_->v_pos(n.plus(j, 1));
                    if (up >= 0) block(up, p) += factor * std::sqrt(n[j] + 1.0);
                }
            }
        }
        if (k.max_abs() == 0) block(0, 0) = 1.0;  // pin the constant mode
        lu_.emplace_back(block);
    }
}

void BlockPreconditioner::apply_inplace(Eigen::VectorXcd& x) const {
    const long nc = basis_->n_count();
    for (long kf = 0; kf < basis_->k_count(); ++kf)
        x.segment(kf * nc, nc) = lu_[kf].solve(x.segment(kf * nc, nc));
}

namespace {

// Restarted GMRES with right preconditioning on the bordered operator.
struct GmresOut {
    int iterations = 0;
    double rel_residual = 1;
    std::vector<double> history;
};

template <class ApplyFn>
GmresOut gmres(const ApplyFn& apply_fn, const BlockPreconditioner& prec, const Eigen::VectorXcd& b,
               Eigen::VectorXcd& x, double tol, int max_iter, int restart) {
    using Vec = Eigen::VectorXcd;
    GmresOut out;
    const double bnorm = b.norm();
    if (bnorm == 0) {
        x.setZero();
        out.rel_residual = 0;
        return out;
    }
    x.setZero();
    Vec r = b;
    double beta = r.norm();
    int total_it = 0;
    while (total_it < max_iter) {
        const int m = std::min<int>(restart, max_iter - total_it);
        std::vector<Vec> v(m + 1);
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
        std::vector<cplx> cs(m), sn(m);
        Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m + 1);
        v[0] = r / beta;
        g[0] = beta;
        int j = 0;
        for (; j < m; ++j) {
            Vec z = v[j];
            prec.apply_inplace(z);
            Vec w = apply_fn(z);
            for (int i = 0; i <= j; ++i) {
                h(i, j) = v[i].dot(w);
                w -= h(i, j) * v[i];
            }
            h(j + 1, j) = w.norm();
            if (std::abs(h(j + 1, j)) > 0) v[j + 1] = w / h(j + 1, j);
            // apply accumulated Givens rotations
            for (int i = 0; i < j; ++i) {
                cplx t = std::conj(cs[i]) * h(i, j) + std::conj(sn[i]) * h(i + 1, j);
                h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
                h(i, j) = t;
            }
            double denom = std::sqrt(std::norm(h(j, j)) + std::norm(h(j + 1, j)));
            if (denom == 0) {
                cs[j] = 1;
                sn[j] = 0;
            } else {
                cs[j] = h(j, j) / denom;
                sn[j] = h(j + 1, j) / denom;
            }
            h(j, j) = std::conj(cs[j]) * h(j, j) + std::conj(sn[j]) * h(j + 1, j);
            h(j + 1, j) = 0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = std::conj(cs[j]) * g[j];
            ++total_it;
            out.history.push_back(std::abs(g[j + 1]) / bnorm);
            if (out.history.back() < tol) {
                ++j;
                break;
            }
        }
        // solve the triangular system and update x
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(j);
        for (int i = j - 1; i >= 0; --i) {
            cplx s = g[i];
            for (int l = i + 1; l < j; ++l) s -= h(i, l) * y[l];
            y[i] = s / h(i, i);
        }
        Vec dz = Vec::Zero(x.size());
        for (int i = 0; i < j; ++i) dz += y[i] * v[i];
        prec.apply_inplace(dz);
        x += dz;
        r = b - apply_fn(x);
        beta = r.norm();
        out.rel_residual = beta / bnorm;
        out.iterations = total_it;
        if (out.rel_residual < tol) return out;
        if (total_it >= max_iter) break;
    }
    return out;
}

}  // namespace

SolveResult solve_mean_zero(const SparseOperator& op, const Potential& pot, const PhaseField& rhs,
                            const SolveOptions& opt) {
    if (!op.basis->same(*rhs.basis())) throw CutMismatch("solve_mean_zero: cut mismatch");
    const double compat = std::abs(dm_integral(rhs, pot));
    if (compat > opt.compat_tol * std::max(1.0, rhs.norm()))
        throw IncompatibleRhs("solve_mean_zero: right-hand side has nonzero dm-mean (" + std::to_string(compat) +
                              ")");

    // bordered operator: x -> L x + (int x dm) e_0
    const FourierSeries& w = pot.weight();
    const double mass = pot.weight_mass();
    const BasisPtr& b = op.basis;
    const long nc = b->n_count();
    std::vector<std::pair<long, cplx>> mean_fn;
    for (auto& [k, wv] : w.c) {
        MIdx mk;
        for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
        if (b->k_in_range(mk)) mean_fn.emplace_back(b->k_flat(mk) * nc, wv / mass);
    }
    const long e0 = b->index(MIdx{}, MIdx{});
    auto apply_fn = [&](const Eigen::VectorXcd& x) {
        Eigen::VectorXcd y = op.mat * x;
        cplx mean = 0;
        for (auto& [idx, wv] : mean_fn) mean += x[idx] * wv;
        y[e0] += mean;
        return y;
    };

    BlockPreconditioner prec(op);
    PhaseField phi(b);
    GmresOut g = gmres(apply_fn, prec, rhs.coeffs(), phi.coeffs(), 0.5 * opt.tol, opt.max_iter, opt.restart);

    // remove any residual dm-mean (L annihilates constants exactly) and
    // restore the reality invariant
    double mean = dm_integral(phi, pot);
    phi.coeffs()[e0] -= mean;
    phi.symmetrize_reality();

    SolveResult res{std::move(phi), 0, g.iterations, std::move(g.history)};
    const double rhs_norm = rhs.norm();
    res.rel_residual = rhs_norm == 0 ? 0 : (op.mat * res.phi.coeffs() - rhs.coeffs()).norm() / rhs_norm;
    if (res.rel_residual > opt.tol)
        throw NoConvergence("solve_mean_zero: GMRES stalled at relative residual " +
                                std::to_string(res.rel_residual),
                            res.history);
    return res;
}

}  // namespace kfp
