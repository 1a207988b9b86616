#include "kfp/phase_field.hpp"

#include <cmath>

namespace kfp {

Basis::Basis(int dim, int nx, int nv) : dim_(dim), cuts_{nx, nv} {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Basis: dim must be 1..3");
    if (nx < 0 || nv < 0) throw std::invalid_argument("Basis: cuts must be nonnegative");
    k_side_ = 2 * nx + 1;
    k_count_ = 1;
    for (int i = 0; i < dim; ++i) k_count_ *= k_side_;
    vidx_ = enumerate_simplex(dim, nv);
    v_lookup_.assign(static_cast<size_t>(std::pow(nv + 1.0, dim)) + 1, -1);
    for (size_t p = 0; p < vidx_.size(); ++p) v_lookup_[v_pack(vidx_[p])] = static_cast<long>(p);
}

long Basis::v_pack(const MIdx& n) const {
    long idx = 0;
    for (int i = 0; i < dim_; ++i) idx = idx * (cuts_.nv + 1) + n[i];
    return idx;
}

long Basis::k_flat(const MIdx& k) const {
    long idx = 0;
    for (int i = 0; i < dim_; ++i) {
        int c = k[i] + cuts_.nx;
        if (c < 0 || c >= k_side_) throw std::out_of_range("Basis: wave vector outside cut");
        idx = idx * k_side_ + c;
    }
    return idx;
}

MIdx Basis::k_of(long flat) const {
    MIdx k;
    for (int i = dim_ - 1; i >= 0; --i) {
        k.v[i] = static_cast<int>(flat % k_side_) - cuts_.nx;
        flat /= k_side_;
    }
    return k;
}

long Basis::v_pos(const MIdx& n) const {
    if (!n.nonneg() || n.sum() > cuts_.nv) return -1;
    return v_lookup_[v_pack(n)];
}

BasisPtr make_basis(int dim, int nx, int nv) { return std::make_shared<Basis>(dim, nx, nv); }
BasisPtr make_basis(int dim, Cuts cuts) { return std::make_shared<Basis>(dim, cuts.nx, cuts.nv); }

PhaseField::PhaseField(BasisPtr basis) : basis_(std::move(basis)) { c_ = Eigen::VectorXcd::Zero(basis_->size()); }

cplx PhaseField::coef(const MIdx& k, const MIdx& n) const {
    long p = basis_->v_pos(n);
    if (p < 0 || !basis_->k_in_range(k)) return 0.0;
    return c_[basis_->k_flat(k) * basis_->n_count() + p];
}

void PhaseField::set_coef(const MIdx& k, const MIdx& n, cplx v) {
    long p = basis_->v_pos(n);
    if (p < 0 || !basis_->k_in_range(k)) throw std::out_of_range("PhaseField: index outside cuts");
    c_[basis_->k_flat(k) * basis_->n_count() + p] = v;
}

void PhaseField::add_coef(const MIdx& k, const MIdx& n, cplx v) {
    long p = basis_->v_pos(n);
    if (p < 0 || !basis_->k_in_range(k)) throw std::out_of_range("PhaseField: index outside cuts");
    c_[basis_->k_flat(k) * basis_->n_count() + p] += v;
}

double PhaseField::reality_defect() const {
    double worst = 0;
    const long nc = basis_->n_count();
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        MIdx k = basis_->k_of(kf);
        MIdx mk;
        for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
        long kg = basis_->k_flat(mk);
        for (long p = 0; p < nc; ++p)
            worst = std::max(worst, std::abs(c_[kf * nc + p] - std::conj(c_[kg * nc + p])));
    }
    return worst;
}

PhaseField& PhaseField::symmetrize_reality() {
    const long nc = basis_->n_count();
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        MIdx k = basis_->k_of(kf);
        MIdx mk;
        for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
        long kg = basis_->k_flat(mk);
        if (kg < kf) continue;
        for (long p = 0; p < nc; ++p) {
            cplx avg = 0.5 * (c_[kf * nc + p] + std::conj(c_[kg * nc + p]));
            c_[kf * nc + p] = avg;
            c_[kg * nc + p] = std::conj(avg);
        }
    }
    return *this;
}

PhaseField PhaseField::embedded(const BasisPtr& target) const {
    if (target->dim() != basis_->dim()) throw CutMismatch("embedded: dimension mismatch");
    if (target->nx() < basis_->nx() || target->nv() < basis_->nv())
        throw CutMismatch("embedded: target cuts smaller than source");
    PhaseField out(target);
    const long nc = basis_->n_count();
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        MIdx k = basis_->k_of(kf);
        long kg = target->k_flat(k);
        for (long p = 0; p < nc; ++p) {
            cplx v = c_[kf * nc + p];
            if (v != 0.0) out.coeffs()[kg * target->n_count() + target->v_pos(basis_->velocity_indices()[p])] = v;
        }
    }
    return out;
}

PhaseField PhaseField::annihilate(int axis) const {
    PhaseField out(basis_);
    const long nc = basis_->n_count();
    const auto& vidx = basis_->velocity_indices();
    for (long kf = 0; kf < basis_->k_count(); ++kf)
        for (long p = 0; p < nc; ++p) {
            const MIdx& n = vidx[p];
            if (n[axis] == 0) continue;
            long q = basis_->v_pos(n.plus(axis, -1));
            out.c_[kf * nc + q] += std::sqrt(static_cast<double>(n[axis])) * c_[kf * nc + p];
        }
    return out;
}

PhaseField PhaseField::mul_v(int axis) const {
    BasisPtr target = make_basis(basis_->dim(), basis_->nx(), basis_->nv() + 1);
    PhaseField out(target);
    const long nc = basis_->n_count();
    const long tc = target->n_count();
    const auto& vidx = basis_->velocity_indices();
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        long kg = target->k_flat(basis_->k_of(kf));
        for (long p = 0; p < nc; ++p) {
            const MIdx& n = vidx[p];
            cplx v = c_[kf * nc + p];
            if (v == 0.0) continue;
            // v_i h_n = sqrt(n_i+1) h_{n+e_i} + sqrt(n_i) h_{n-e_i}
            out.c_[kg * tc + target->v_pos(n.plus(axis, 1))] += std::sqrt(n[axis] + 1.0) * v;
            if (n[axis] > 0) out.c_[kg * tc + target->v_pos(n.plus(axis, -1))] += std::sqrt(static_cast<double>(n[axis])) * v;
        }
    }
    return out;
}

PhaseField PhaseField::create(int axis) const {
    BasisPtr target = make_basis(basis_->dim(), basis_->nx(), basis_->nv() + 1);
    PhaseField out(target);
    const long nc = basis_->n_count();
    const long tc = target->n_count();
    const auto& vidx = basis_->velocity_indices();
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        long kg = target->k_flat(basis_->k_of(kf));
        for (long p = 0; p < nc; ++p) {
            const MIdx& n = vidx[p];
            cplx v = c_[kf * nc + p];
            if (v == 0.0) continue;
            out.c_[kg * tc + target->v_pos(n.plus(axis, 1))] += std::sqrt(n[axis] + 1.0) * v;
        }
    }
    return out;
}

PhaseField PhaseField::dx(int axis) const {
    PhaseField out(basis_);
    const long nc = basis_->n_count();
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        MIdx k = basis_->k_of(kf);
        cplx factor(0.0, 2.0 * std::acos(-1.0) * k[axis]);
        for (long p = 0; p < nc; ++p) out.c_[kf * nc + p] = factor * c_[kf * nc + p];
    }
    return out;
}

PhaseField PhaseField::gamma_average_field() const {
    PhaseField out(basis_);
    const long nc = basis_->n_count();
    for (long kf = 0; kf < basis_->k_count(); ++kf) out.c_[kf * nc] = c_[kf * nc];
    return out;
}

void hermite_values(int nmax, double v, std::vector<double>& out) {
    out.resize(nmax + 1);
    out[0] = 1.0;
    if (nmax >= 1) out[1] = v;
    for (int n = 1; n < nmax; ++n)
        out[n + 1] = (v * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) / std::sqrt(n + 1.0);
}

double PhaseField::eval(const std::array<double, kMaxDim>& x, const std::array<double, kMaxDim>& v) const {
    const int d = basis_->dim();
    const int nv = basis_->nv();
    std::array<std::vector<double>, kMaxDim> hv;
    for (int i = 0; i < d; ++i) hermite_values(nv, v[i], hv[i]);
    const auto& vidx = basis_->velocity_indices();
    std::vector<double> hn(vidx.size());
    for (size_t p = 0; p < vidx.size(); ++p) {
        double t = 1;
        for (int i = 0; i < d; ++i) t *= hv[i][vidx[p][i]];
        hn[p] = t;
    }
    const double two_pi = 2.0 * std::acos(-1.0);
    cplx total = 0;
    const long nc = basis_->n_count();
    for (long kf = 0; kf < basis_->k_count(); ++kf) {
        double phase = 0;
        MIdx k = basis_->k_of(kf);
        for (int i = 0; i < d; ++i) phase += k[i] * x[i];
        cplx e = std::polar(1.0, two_pi * phase);
        cplx s = 0;
        for (long p = 0; p < nc; ++p) s += c_[kf * nc + p] * hn[p];
        total += e * s;
    }
    return total.real();
}

PhaseField PhaseField::operator+(const PhaseField& o) const {
    if (!basis_->same(*o.basis_)) throw CutMismatch("PhaseField: cut mismatch in +");
    PhaseField r = *this;
    r.c_ += o.c_;
    return r;
}

PhaseField PhaseField::operator-(const PhaseField& o) const {
    if (!basis_->same(*o.basis_)) throw CutMismatch("PhaseField: cut mismatch in -");
    PhaseField r = *this;
    r.c_ -= o.c_;
    return r;
}

PhaseField PhaseField::operator*(double s) const {
    PhaseField r = *this;
    r.c_ *= s;
    return r;
}

PhaseField PhaseField::operator*(cplx s) const {
    PhaseField r = *this;
    r.c_ *= s;
    return r;
}

PhaseField PhaseField::constant(BasisPtr basis, double value) {
    PhaseField f(std::move(basis));
    f.set_coef(MIdx{}, MIdx{}, value);
    return f;
}

PhaseField PhaseField::hermite_unit(BasisPtr basis, const MIdx& n) {
    PhaseField f(std::move(basis));
    f.set_coef(MIdx{}, n, 1.0);
    return f;
}

PhaseField PhaseField::fourier_unit(BasisPtr basis, const MIdx& k, cplx amp) {
    PhaseField f(basis);
    f.set_coef(k, MIdx{}, amp);
    MIdx mk;
    for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
    if (!(mk == k)) f.set_coef(mk, MIdx{}, std::conj(amp));
    return f;
}

}  // namespace kfp
