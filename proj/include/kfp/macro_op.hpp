#pragma once

#include <map>
#include <vector>

#include "kfp/harmonic.hpp"
#include "kfp/multipoly.hpp"

namespace kfp {

struct InsufficientOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegenerateSecondOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Effective tensors of the macroscopic operator A = sum_a t_a d^a.
// `order` is the highest |a| through which the tensors are known; entries
// with |a| <= 1 must vanish.
template <class T>
struct DiffTensors {
    int dim = 1;
    int order = 0;
    std::map<MIdx, T> coef;

    static DiffTensors laplacian(int dim, int order = 2) {
        DiffTensors t;
        t.dim = dim;
        t.order = order;
        for (int i = 0; i < dim; ++i) t.coef[MIdx{}.plus(i, 2)] = T(1);
        return t;
    }

    T at(const MIdx& a) const {
        auto it = coef.find(a);
        return it == coef.end() ? T(0) : it->second;
    }

    // Degree-two part as a symmetric matrix: M_ii = t_{2e_i}, M_ij = t_{e_i+e_j}/2.
    std::array<std::array<T, kMaxDim>, kMaxDim> second_order_matrix() const {
        std::array<std::array<T, kMaxDim>, kMaxDim> M{};
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                MIdx a = MIdx{}.plus(i, 1).plus(j, 1);
                M[i][j] = i == j ? at(a) : at(a) / T(2);
            }
        return M;
    }
};

template <class T>
PolyT<T> macro_apply(const DiffTensors<T>& t, const PolyT<T>& q) {
    if (q.dim() != t.dim) throw std::invalid_argument("macro_apply: dimension mismatch");
    if (q.degree() > t.order)
        throw InsufficientOrder("macro_apply: polynomial degree exceeds available tensor order");
    PolyT<T> out(q.dim());
    for (auto& [a, c] : t.coef) {
        if (detail::coef_is_zero(c)) continue;
        out = out + q.derivative(a) * c;
    }
    return out;
}

// q(M y): substitute x_i = sum_j M_ij y_j.
template <class T>
PolyT<T> poly_compose_linear(const PolyT<T>& p, const std::array<std::array<T, kMaxDim>, kMaxDim>& M) {
    const int d = p.dim();
    std::vector<PolyT<T>> rows;
    for (int i = 0; i < d; ++i) {
        PolyT<T> row(d);
        for (int j = 0; j < d; ++j) row.add_term(MIdx{}.plus(j, 1), M[i][j]);
        rows.push_back(row);
    }
    PolyT<T> out(d);
    for (auto& [a, c] : p.terms()) {
        PolyT<T> term = PolyT<T>::constant(d, c);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < a[i]; ++k) term = term * rows[i];
        out = out + term;
    }
    return out;
}

namespace detail {

// LDL^T of a symmetric positive definite matrix, exact in T.
template <class T>
void ldlt(int d, const std::array<std::array<T, kMaxDim>, kMaxDim>& M,
          std::array<std::array<T, kMaxDim>, kMaxDim>& L, std::array<T, kMaxDim>& D) {
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) L[i][j] = T(i == j ? 1 : 0);
    for (int j = 0; j < d; ++j) {
        T dj = M[j][j];
        for (int k = 0; k < j; ++k) dj -= L[j][k] * L[j][k] * D[k];
        if (!(coef_to_double(dj) > 0))
            throw DegenerateSecondOrder("macro_invert: second-order part is not positive definite");
        D[j] = dj;
        for (int i = j + 1; i < d; ++i) {
            T s = M[i][j];
            for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k] * D[k];
            L[i][j] = s / dj;
        }
    }
}

// Inverse of a unit lower-triangular matrix.
template <class T>
std::array<std::array<T, kMaxDim>, kMaxDim> unit_lower_inverse(int d,
                                                               const std::array<std::array<T, kMaxDim>, kMaxDim>& L) {
    std::array<std::array<T, kMaxDim>, kMaxDim> inv{};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv[i][j] = T(i == j ? 1 : 0);
    for (int i = 1; i < d; ++i)
        for (int j = 0; j < i; ++j) {
            T s = T(0);
            for (int k = j; k < i; ++k) s += L[i][k] * inv[k][j];
            inv[i][j] = T(0) - s;
        }
    return inv;
}

// Recursion of the inversion lemma for homogeneous p, with the degree-two
// part already reduced to the diagonal metric.
template <class T>
PolyT<T> invert_homogeneous(const DiffTensors<T>& higher, const DiagMetric<T>& metric, const PolyT<T>& p) {
    const int mu = p.degree();
    if (mu < 0) return p;  // zero polynomial
    std::vector<PolyT<T>> q(static_cast<size_t>(mu) + 2, PolyT<T>(p.dim()));
    q[0] = s_apply_metric(p, metric);
    for (int k = 1; k <= mu + 1; ++k) {
        PolyT<T> rhs(p.dim());
        for (int i = 3; i <= k + 2; ++i) {
            const PolyT<T>& qprev = q[k + 2 - i];
            if (qprev.is_zero()) continue;
            for (auto& [a, c] : higher.coef) {
                if (a.sum() != i || coef_is_zero(c)) continue;
                rhs = rhs + qprev.derivative(a) * c;
            }
        }
        if (!rhs.is_zero()) q[k] = s_apply_metric(PolyT<T>(p.dim()) - rhs, metric);
    }
    PolyT<T> out(p.dim());
    for (auto& qk : q) out = out + qk;
    return out;
}

}  // namespace detail

template <class T>
struct MacroInvertResult {
    PolyT<T> q;
    double norm_ratio = 0;  // ||q||_{P_r} / ||p||_{P_r}
};

// Solve A q = p. The second-order part is normalized by an exact change of
// coordinates (LDL^T), so the identity A q = p holds in the coefficient
// arithmetic of T; the certified norm ratio is reported at the given r.
template <class T>
MacroInvertResult<T> macro_invert(const DiffTensors<T>& t, const PolyT<T>& p, double r) {
    const int d = t.dim;
    if (p.dim() != d) throw std::invalid_argument("macro_invert: dimension mismatch");
    for (auto& [a, c] : t.coef)
        if (a.sum() <= 1 && !detail::coef_is_zero(c))
            throw std::invalid_argument("macro_invert: tensors of order <= 1 must vanish");
    if (p.degree() + 2 > t.order)
        throw InsufficientOrder("macro_invert: tensors not available through degree deg(p)+2");

    auto M = t.second_order_matrix();
    std::array<std::array<T, kMaxDim>, kMaxDim> L{};
    std::array<T, kMaxDim> D{};
    detail::ldlt(d, M, L, D);

    // x = L y turns the degree-two part into sum_i D_i d^2/dy_i^2; the higher
    // tensors transform through the symbol polynomial with dx_i = sum_j S_ij dy_j,
    // S = L^{-T}.
    auto Linv = detail::unit_lower_inverse(d, L);
    std::array<std::array<T, kMaxDim>, kMaxDim> S{};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) S[i][j] = Linv[j][i];

    PolyT<T> sym(d);
    for (auto& [a, c] : t.coef)
        if (a.sum() >= 3) sym.add_term(a, c);
    PolyT<T> sym_y = poly_compose_linear(sym, S);

    DiffTensors<T> higher;
    higher.dim = d;
    higher.order = t.order;
    for (auto& [a, c] : sym_y.terms()) higher.coef[a] = c;

    DiagMetric<T> metric;
    metric.dim = d;
    for (int i = 0; i < d; ++i) metric.w[i] = D[i];

    PolyT<T> p_y = poly_compose_linear(p, L);
    PolyT<T> q_y(d);
    for (int deg = 0; deg <= p_y.degree(); ++deg) {
        PolyT<T> part = p_y.homogeneous_part(deg);
        if (!part.is_zero()) q_y = q_y + detail::invert_homogeneous(higher, metric, part);
    }
    MacroInvertResult<T> res;
    res.q = poly_compose_linear(q_y, Linv);
    double pn = pr_norm(p, r);
    res.norm_ratio = pn > 0 ? pr_norm(res.q, r) / pn : 0.0;
    return res;
}

}  // namespace kfp
