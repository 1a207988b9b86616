#include "kfp/correctors.hpp"

#include <cmath>

namespace kfp {

const PhaseField& CorrectorSet::corrector(const MIdx& alpha) const {
    auto it = phi.find(alpha);
    if (it == phi.end()) throw std::out_of_range("CorrectorSet: corrector order not built");
    return it->second;
}

DiffTensors<double> CorrectorSet::tensors() const {
    DiffTensors<double> t;
    t.dim = dim;
    t.order = order;
    for (auto& [a, v] : a_alpha)
        if (v != 0.0) t.coef[a] = v;
    return t;
}

uint64_t CorrectorSet::cache_key() const {
    Fnv1a h;
    h.update_pod(dim);
    h.update_pod(order);
    h.update_pod(base_cuts.nx);
    h.update_pod(base_cuts.nv);
    h.update_pod(tol);
    uint64_t ph = pot.hash(), fh = friction.hash();
    h.update_pod(ph);
    h.update_pod(fh);
    return h.digest();
}

CorrectorSet::GrowthFit CorrectorSet::growth_fit() const {
    GrowthFit fit;
    fit.level_norms.assign(order + 1, 0.0);
    for (auto& [a, f] : phi) fit.level_norms[a.sum()] = std::max(fit.level_norms[a.sum()], f.norm());
    // least squares of log max-norm against level, k >= 1
    int n = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 1; k <= order; ++k) {
        if (fit.level_norms[k] <= 0) continue;
        double x = k, y = std::log(fit.level_norms[k]);
        ++n;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (n >= 2) {
        double denom = n * sxx - sx * sx;
        fit.log_c = (n * sxy - sx * sy) / denom;
        double ybar = sy / n, ss_tot = 0, ss_res = 0;
        double intercept = ybar - fit.log_c * sx / n;
        for (int k = 1; k <= order; ++k) {
            if (fit.level_norms[k] <= 0) continue;
            double y = std::log(fit.level_norms[k]);
            ss_tot += (y - ybar) * (y - ybar);
            ss_res += (y - intercept - fit.log_c * k) * (y - intercept - fit.log_c * k);
        }
        fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return fit;
}

CorrectorSet build_correctors(const Potential& pot, const FrictionMatrix& a, int order, Cuts cuts, double tol,
                              int threads) {
    if (order < 1) throw std::invalid_argument("build_correctors: order must be >= 1");
    const int d = pot.dim();
    CorrectorSet cs;
    cs.dim = d;
    cs.order = order;
    cs.pot = pot;
    cs.friction = a;
    cs.base_cuts = cuts;
    cs.tol = tol;

    cs.phi.emplace(MIdx{}, PhaseField::constant(make_basis(d, cuts.nx, cuts.nv), 1.0));
    cs.a_alpha[MIdx{}] = 0.0;

    SolveOptions opt;
    opt.tol = tol;
    opt.compat_tol = std::max(tol, 1e-10);

    for (int level = 1; level <= order; ++level) {
        // the cut is raised with the level so multiplication by v_j stays exact
        BasisPtr basis = make_basis(d, cuts.nx, cuts.nv + level);
        SparseOperator op = assemble_operator(pot, a, basis);
        auto alphas = enumerate_level(d, level);
        std::vector<PhaseField> solved(alphas.size(), PhaseField(basis));
        std::vector<double> resid(alphas.size(), 0.0);
        std::vector<double> means(alphas.size(), 0.0);
        std::exception_ptr failure;
        parallel_for(static_cast<std::int64_t>(alphas.size()), threads, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t idx = lo; idx < hi; ++idx) {
                try {
                    const MIdx& alpha = alphas[idx];
                    PhaseField rhs(basis);
                    double mean_total = 0;
                    for (int j = 0; j < d; ++j) {
                        if (alpha[j] == 0) continue;
                        const PhaseField& prev = cs.phi.at(alpha.plus(j, -1));
                        PhaseField vj_prev = prev.mul_v(j);
                        rhs = rhs + vj_prev;
                        mean_total += dm_integral(vj_prev, pot);
                    }
                    rhs.add_coef(MIdx{}, MIdx{}, -mean_total);
                    auto res = solve_mean_zero(op, pot, rhs, opt);
                    solved[idx] = std::move(res.phi);
                    resid[idx] = res.rel_residual;
                    means[idx] = mean_total;
                } catch (...) {
                    if (!failure) failure = std::current_exception();
                }
            }
        });
        if (failure) std::rethrow_exception(failure);
        for (size_t i = 0; i < alphas.size(); ++i) {
            cs.phi.emplace(alphas[i], std::move(solved[i]));
            cs.residuals[alphas[i]] = resid[i];
            // positive-definite convention: a_alpha = +sum_j <v_j phi_{a-e_j}>_m
            cs.a_alpha[alphas[i]] = level <= 1 ? 0.0 : means[i];
        }
    }

    cs.a_matrix.resize(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            PhaseField vi_phj = cs.phi.at(MIdx{}.plus(j, 1)).mul_v(i);
            cs.a_field[i][j] = gamma_average(vi_phj);
            cs.a_matrix(i, j) = sigma_average(cs.a_field[i][j], pot);
        }
    return cs;
}

SecondCorrectors second_correctors(const CorrectorSet& cset, int threads) {
    if (cset.order < 1) throw std::invalid_argument("second_correctors: corrector set has order < 1");
    const int d = cset.dim;
    const Potential& pot = cset.pot;
    BasisPtr basis = make_basis(d, cset.base_cuts.nx, cset.base_cuts.nv + 2);
    SparseOperator op = assemble_operator(pot, cset.friction, basis);
    SolveOptions opt;
    opt.tol = cset.tol;

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) pairs.emplace_back(i, j);
    std::vector<PhaseField> solved(pairs.size(), PhaseField(basis));
    std::exception_ptr failure;
    parallel_for(static_cast<std::int64_t>(pairs.size()), threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            try {
                auto [i, j] = pairs[idx];
                PhaseField rhs = cset.corrector(MIdx{}.plus(j, 1)).mul_v(i).embedded(basis);
                rhs.add_coef(MIdx{}, MIdx{}, -cset.a_matrix(i, j));
                solved[idx] = solve_mean_zero(op, pot, rhs, opt).phi;
            } catch (...) {
                if (!failure) failure = std::current_exception();
            }
        }
    });
    if (failure) std::rethrow_exception(failure);
    SecondCorrectors out;
    for (size_t p = 0; p < pairs.size(); ++p) out.emplace(pairs[p], std::move(solved[p]));
    return out;
}

namespace {

// <B f>_gamma as a scalar Fourier series, B = -v.grad_x + grad H.grad_v.
FourierSeries gamma_average_B(const PhaseField& f, const Potential& pot) {
    const int d = f.basis()->dim();
    FourierSeries out(d);
    for (int l = 0; l < d; ++l) {
        // <v_l g>_gamma picks the n = e_l slice of g
        PhaseField g = f.dx(l);
        FourierSeries slice(d);
        const BasisPtr& b = g.basis();
        long pos = b->v_pos(MIdx{}.plus(l, 1));
        for (long kf = 0; kf < b->k_count(); ++kf) {
            cplx v = g.coeffs()[kf * b->n_count() + pos];
            if (v != cplx(0)) slice.c[b->k_of(kf)] = v;
        }
        out = out - slice;
        out = out + pot.dh(l).product(gamma_average(f.annihilate(l)));
    }
    return out;
}

double sup_on_grid(const FourierSeries& s) {
    const int d = s.dim;
    const int per_axis = 64 * (s.max_mode() + 1);
    double worst = 0;
    std::array<double, kMaxDim> x{};
    long total = 1;
    for (int i = 0; i < d; ++i) total *= per_axis;
    for (long t = 0; t < total; ++t) {
        long r = t;
        for (int i = 0; i < d; ++i) {
            x[i] = static_cast<double>(r % per_axis) / per_axis;
            r /= per_axis;
        }
        worst = std::max(worst, std::abs(s.eval(x)));
    }
    return worst;
}

}  // namespace

double avg_psi_identity(const SecondCorrectors& psi, const CorrectorSet& cset) {
    double worst = 0;
    for (auto& [ij, field] : psi) {
        FourierSeries lhs = gamma_average_B(field, cset.pot);
        FourierSeries rhs = cset.a_field[ij.first][ij.second];
        rhs.add(MIdx{}, -cplx(cset.a_matrix(ij.first, ij.second)));
        worst = std::max(worst, sup_on_grid(lhs - rhs));
    }
    return worst;
}

DivergenceFormReport divergence_form_identity(const CorrectorSet& cset) {
    const int d = cset.dim;
    DivergenceFormReport rep;
    for (int j = 0; j < d; ++j) {
        FourierSeries div(d), gradH_dot(d), transport(d);
        for (int i = 0; i < d; ++i) {
            div = div + cset.a_field[i][j].derivative(i);
            gradH_dot = gradH_dot + cset.pot.dh(i).product(cset.a_field[i][j]);
            // <v.grad_x phi_j>_gamma: the n = e_i slice of d_i phi_j
            const PhaseField& phj = cset.corrector(MIdx{}.plus(j, 1));
            PhaseField g = phj.dx(i);
            const BasisPtr& b = g.basis();
            long pos = b->v_pos(MIdx{}.plus(i, 1));
            for (long kf = 0; kf < b->k_count(); ++kf) {
                cplx v = g.coeffs()[kf * b->n_count() + pos];
                if (v != cplx(0)) transport.add(b->k_of(kf), v);
            }
        }
        rep.sup_residual = std::max(rep.sup_residual, sup_on_grid(div - gradH_dot));
        rep.cross_residual = std::max(rep.cross_residual, sup_on_grid(div - transport));
    }
    return rep;
}

}  // namespace kfp
