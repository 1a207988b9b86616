#pragma once

#include <vector>

#include "kfp/multipoly.hpp"

namespace kfp {

// Harmonic decomposition and the explicit right inverse S of the Laplacian
// on homogeneous polynomials. Everything here is also provided for the
// anisotropic operator sum_i d_i d^2/dy_i^2 with diagonal weights d_i > 0,
// which is what the degree-two part of the macroscopic operator becomes
// after an exact LDL^T change of coordinates. The isotropic case is
// weights = (1,...,1), where the quadratic form Q is |x|^2.

template <class T>
struct DiagMetric {
    int dim;
    std::array<T, kMaxDim> w;  // weights d_i of the operator

    static DiagMetric identity(int dim) {
        DiagMetric m;
        m.dim = dim;
        for (int i = 0; i < kMaxDim; ++i) m.w[i] = T(1);
        return m;
    }

    // Q(y) = sum y_i^2 / d_i, the multiplier adjoint to the operator.
    PolyT<T> quad_form() const {
        PolyT<T> q(dim);
        for (int i = 0; i < dim; ++i) q.set(MIdx{}.plus(i, 2), T(1) / w[i]);
        return q;
    }

    PolyT<T> apply(const PolyT<T>& p) const {
        PolyT<T> r(p.dim());
        for (int i = 0; i < dim; ++i) r = r + p.derivative(i, 2) * w[i];
        return r;
    }
};

// p = sum_k Q^k h_k with each h_k annihilated by the (an)isotropic Laplacian.
// Exact in the coefficient arithmetic of T.
template <class T>
std::vector<PolyT<T>> harmonic_decompose_metric(const PolyT<T>& p, const DiagMetric<T>& metric) {
    if (!p.is_homogeneous()) throw NonHomogeneous("harmonic_decompose: input not homogeneous");
    const int m = p.degree();
    std::vector<PolyT<T>> out;
    if (m <= 1) {
        out.push_back(p);
        return out;
    }
    PolyT<T> lap = metric.apply(p);
    std::vector<PolyT<T>> sub = harmonic_decompose_metric(lap, metric);
    // S applied to lap, ambient degree m-2: Q^(k+1) g_k / b_k.
    const int mu = m - 2;
    const int d = metric.dim;
    PolyT<T> q_form = metric.quad_form();
    PolyT<T> u(p.dim());
    out.assign(static_cast<size_t>(m / 2) + 1, PolyT<T>(p.dim()));
    PolyT<T> q_pow = q_form;
    for (size_t k = 0; k < sub.size(); ++k) {
        T bk = T((2 * static_cast<long long>(k) + 2) * (d + 2 * mu - 2 * static_cast<long long>(k)));
        PolyT<T> hk1 = sub[k] * (T(1) / bk);
        out[k + 1] = hk1;
        u = u + q_pow * hk1;
        q_pow = q_pow * q_form;
    }
    out[0] = p - u;
    while (!out.empty() && out.back().is_zero()) out.pop_back();
    if (out.empty()) out.push_back(PolyT<T>(p.dim()));
    return out;
}

template <class T>
std::vector<PolyT<T>> harmonic_decompose(const PolyT<T>& p) {
    return harmonic_decompose_metric(p, DiagMetric<T>::identity(p.dim()));
}

template <class T>
PolyT<T> reconstruct_from_harmonics(const std::vector<PolyT<T>>& parts, const DiagMetric<T>& metric) {
    PolyT<T> q = metric.quad_form();
    PolyT<T> acc(metric.dim);
    PolyT<T> q_pow = PolyT<T>::constant(metric.dim, T(1));
    for (auto& h : parts) {
        acc = acc + q_pow * h;
        q_pow = q_pow * q;
    }
    return acc;
}

// S(Q^k p_k) = Q^(k+1) p_k / b_k with b_k = (2k+2)(d+2m-2k), m the degree of
// the homogeneous input. Right inverse: metric.apply(s_apply(p)) == p.
template <class T>
PolyT<T> s_apply_metric(const PolyT<T>& p, const DiagMetric<T>& metric) {
    if (!p.is_homogeneous()) throw NonHomogeneous("s_apply: input not homogeneous");
    if (p.is_zero()) return p;
    const int m = p.degree();
    const int d = metric.dim;
    auto parts = harmonic_decompose_metric(p, metric);
    PolyT<T> q_form = metric.quad_form();
    PolyT<T> q_pow = q_form;  // Q^(k+1) at k = 0
    PolyT<T> out(p.dim());
    for (size_t k = 0; k < parts.size(); ++k) {
        T bk = T((2 * static_cast<long long>(k) + 2) * (d + 2 * m - 2 * static_cast<long long>(k)));
        out = out + q_pow * parts[k] * (T(1) / bk);
        q_pow = q_pow * q_form;
    }
    return out;
}

template <class T>
PolyT<T> s_apply(const PolyT<T>& p) {
    return s_apply_metric(p, DiagMetric<T>::identity(p.dim()));
}

}  // namespace kfp
