#include "kfp/spectral_operator.hpp"

#include <numbers>
#include <vector>

namespace kfp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SparseOperator assemble_operator(const Potential& pot, const FrictionMatrix& a, BasisPtr basis) {
    const int d = basis->dim();
    if (pot.dim() != d || a.dim() != d) throw std::invalid_argument("assemble_operator: dimension mismatch");
    if (basis->nx() < 0 || basis->nv() < 1) throw std::invalid_argument("assemble_operator: cuts too small");
    a.validate();
    if (pot.max_mode() > 2 * basis->nx() || a.max_mode() > 2 * basis->nx())
        throw std::invalid_argument("assemble_operator: cuts too small to hold the coefficient convolutions");

    const long nc = basis->n_count();
    const auto& vidx = basis->velocity_indices();

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<size_t>(basis->size()) * (2 * d + d * d + 2));

    for (long kf = 0; kf < basis->k_count(); ++kf) {
        const MIdx kin = basis->k_of(kf);
        for (long p = 0; p < nc; ++p) {
            const MIdx& n = vidx[p];
            const long col = kf * nc + p;

            // collision: a_ij(x) A*_i A_j, preserves |n|_1
            for (int j = 0; j < d; ++j) {
                if (n[j] == 0) continue;
                for (int i = 0; i < d; ++i) {
                    const double amp = std::sqrt(static_cast<double>(n[j]) * (n[i] + 1 - (i == j ? 1 : 0)));
                    const MIdx m = n.plus(j, -1).plus(i, 1);
                    const long q = basis->v_pos(m);
                    for (auto& [ka, va] : a.entry(i, j).c) {
                        MIdx kout;
                        for (int t = 0; t < kMaxDim; ++t) kout.v[t] = kin.v[t] + ka.v[t];
                        if (!basis->k_in_range(kout)) continue;
                        trip.emplace_back(basis->k_flat(kout) * nc + q, col, va * amp);
                    }
                }
            }

            // transport: -2 pi i k_j (A_j + A*_j), diagonal in k
            for (int j = 0; j < d; ++j) {
                if (kin[j] == 0) continue;
                const cplx factor(0.0, -kTwoPi * kin[j]);
                if (n[j] > 0)
                    trip.emplace_back(kf * nc + basis->v_pos(n.plus(j, -1)), col,
                                      factor * std::sqrt(static_cast<double>(n[j])));
                const long up = basis->v_pos(n.plus(j, 1));
                if (up >= 0) trip.emplace_back(kf * nc + up, col, factor * std::sqrt(n[j] + 1.0));
            }

            // force: (d_j H)(x) A_j by Fourier convolution
            for (int j = 0; j < d; ++j) {
                if (n[j] == 0) continue;
                const double amp = std::sqrt(static_cast<double>(n[j]));
                const long q = basis->v_pos(n.plus(j, -1));
                for (auto& [kh, vh] : pot.dh(j).c) {
                    MIdx kout;
                    for (int t = 0; t < kMaxDim; ++t) kout.v[t] = kin.v[t] + kh.v[t];
                    if (!basis->k_in_range(kout)) continue;
                    trip.emplace_back(basis->k_flat(kout) * nc + q, col, vh * amp);
                }
            }
        }
    }

    SparseOperator op;
    op.basis = std::move(basis);
    op.mat.resize(op.basis->size(), op.basis->size());
    op.mat.setFromTriplets(trip.begin(), trip.end());
    op.mat.makeCompressed();
    op.a_mean = a.mean();
    op.pot_hash = pot.hash();
    op.friction_hash = a.hash();
    return op;
}

PhaseField apply(const SparseOperator& op, const PhaseField& f) {
    if (!op.basis->same(*f.basis())) throw CutMismatch("apply: operator and field cuts differ");
    PhaseField out(f.basis());
    out.coeffs() = op.mat * f.coeffs();
    return out;
}

double dm_integral(const PhaseField& f, const Potential& pot) {
    const FourierSeries& w = pot.weight();
    const BasisPtr& b = f.basis();
    const long nc = b->n_count();
    cplx s = 0;
    for (auto& [k, wv] : w.c) {
        MIdx mk;
        for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
        if (!b->k_in_range(mk)) continue;
        s += f.coeffs()[b->k_flat(mk) * nc] * wv;
    }
    return (s / pot.weight_mass()).real();
}

double inner_product_m(const PhaseField& f, const PhaseField& g, const Potential& pot) {
    if (!f.basis()->same(*g.basis())) throw CutMismatch("inner_product_m: cut mismatch");
    const FourierSeries& w = pot.weight();
    const BasisPtr& b = f.basis();
    const long nc = b->n_count();
    cplx s = 0;
    for (long kf = 0; kf < b->k_count(); ++kf) {
        const MIdx k1 = b->k_of(kf);
        for (auto& [kw, wv] : w.c) {
            // need k1 + k2 + kw = 0
            MIdx k2;
            for (int i = 0; i < kMaxDim; ++i) k2.v[i] = -k1.v[i] - kw.v[i];
            if (!b->k_in_range(k2)) continue;
            const long kg = b->k_flat(k2);
            cplx dot = 0;
            for (long p = 0; p < nc; ++p) dot += f.coeffs()[kf * nc + p] * g.coeffs()[kg * nc + p];
            s += dot * wv;
        }
    }
    return (s / pot.weight_mass()).real();
}

FourierSeries gamma_average(const PhaseField& f) {
    const BasisPtr& b = f.basis();
    FourierSeries out(b->dim());
    const long nc = b->n_count();
    for (long kf = 0; kf < b->k_count(); ++kf) {
        cplx v = f.coeffs()[kf * nc];
        if (v != cplx(0)) out.c[b->k_of(kf)] = v;
    }
    return out;
}

double sigma_average(const FourierSeries& g, const Potential& pot) {
    const FourierSeries& w = pot.weight();
    cplx s = 0;
    for (auto& [k, gv] : g.c) {
        MIdx mk;
        for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
        s += gv * w.coef(mk);
    }
    return (s / pot.weight_mass()).real();
}

}  // namespace kfp
