#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "kfp/common.hpp"
#include "kfp/rational.hpp"

namespace kfp {

struct NonHomogeneous : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {
inline bool coef_is_zero(const Rat& r) { return r.is_zero(); }
inline bool coef_is_zero(double x) { return x == 0.0; }
inline double coef_to_double(const Rat& r) { return r.to_double(); }
inline double coef_to_double(double x) { return x; }
}  // namespace detail

// Sparse multivariate polynomial, coefficients keyed by monomial exponent.
// T is Rat for the symbolic identities and double for solver-derived data.
template <class T>
class PolyT {
  public:
    using Coef = T;
    using Map = std::map<MIdx, T>;

    explicit PolyT(int dim = 1) : dim_(dim) {}

    static PolyT constant(int dim, T c) {
        PolyT p(dim);
        p.set(MIdx{}, c);
        return p;
    }
    static PolyT monomial(int dim, const MIdx& a, T c) {
        PolyT p(dim);
        p.set(a, c);
        return p;
    }

    int dim() const { return dim_; }
    const Map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    T coef(const MIdx& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? T(0) : it->second;
    }

    void set(const MIdx& a, T c) {
        if (detail::coef_is_zero(c))
            terms_.erase(a);
        else
            terms_[a] = c;
    }

    void add_term(const MIdx& a, T c) {
        auto it = terms_.find(a);
        if (it == terms_.end()) {
            if (!detail::coef_is_zero(c)) terms_[a] = c;
        } else {
            it->second += c;
            if (detail::coef_is_zero(it->second)) terms_.erase(it);
        }
    }

    int degree() const {
        int d = -1;
        for (auto& [a, c] : terms_) d = std::max(d, a.sum());
        return d;  // -1 for the zero polynomial
    }

    bool is_homogeneous() const {
        int d = -1;
        for (auto& [a, c] : terms_) {
            if (d < 0)
                d = a.sum();
            else if (a.sum() != d)
                return false;
        }
        return true;
    }

    PolyT homogeneous_part(int deg) const {
        PolyT r(dim_);
        for (auto& [a, c] : terms_)
            if (a.sum() == deg) r.set(a, c);
        return r;
    }

    PolyT operator+(const PolyT& o) const {
        check_dim(o);
        PolyT r = *this;
        for (auto& [a, c] : o.terms_) r.add_term(a, c);
        return r;
    }
    PolyT operator-(const PolyT& o) const {
        check_dim(o);
        PolyT r = *this;
        for (auto& [a, c] : o.terms_) r.add_term(a, T(0) - c);
        return r;
    }
    PolyT operator*(const PolyT& o) const {
        check_dim(o);
        PolyT r(dim_);
        for (auto& [a, ca] : terms_)
            for (auto& [b, cb] : o.terms_) {
                MIdx s;
                for (int i = 0; i < kMaxDim; ++i) s.v[i] = a.v[i] + b.v[i];
                r.add_term(s, ca * cb);
            }
        return r;
    }
    PolyT operator*(const T& c) const {
        PolyT r(dim_);
        for (auto& [a, ca] : terms_) r.add_term(a, ca * c);
        return r;
    }

    PolyT derivative(int axis, int order = 1) const {
        PolyT r = *this;
        for (int k = 0; k < order; ++k) {
            PolyT s(dim_);
            for (auto& [a, c] : r.terms_) {
                if (a[axis] == 0) continue;
                s.add_term(a.plus(axis, -1), c * T(a[axis]));
            }
            r = s;
        }
        return r;
    }

    PolyT derivative(const MIdx& alpha) const {
        PolyT r = *this;
        for (int i = 0; i < dim_; ++i)
            if (alpha[i] > 0) r = r.derivative(i, alpha[i]);
        return r;
    }

    PolyT laplacian() const {
        PolyT r(dim_);
        for (int i = 0; i < dim_; ++i) r = r + derivative(i, 2);
        return r;
    }

    double eval(const std::array<double, kMaxDim>& x) const {
        double s = 0;
        for (auto& [a, c] : terms_) {
            double t = detail::coef_to_double(c);
            for (int i = 0; i < dim_; ++i)
                for (int k = 0; k < a[i]; ++k) t *= x[i];
            s += t;
        }
        return s;
    }

    template <class U>
    PolyT<U> convert() const {
        PolyT<U> r(dim_);
        for (auto& [a, c] : terms_) r.set(a, U(detail::coef_to_double(c)));
        return r;
    }

  private:
    int dim_;
    Map terms_;

    void check_dim(const PolyT& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("PolyT: dimension mismatch");
    }
};

using MultiPoly = PolyT<Rat>;
using DPoly = PolyT<double>;

inline DPoly to_dpoly(const MultiPoly& p) { return p.convert<double>(); }

// |x|^2 as a polynomial.
template <class T>
PolyT<T> radius_sq(int dim) {
    PolyT<T> r(dim);
    for (int i = 0; i < dim; ++i) r.set(MIdx{}.plus(i, 2), T(1));
    return r;
}

// <p,q>_{P_r} = sum_a r^(2|a|)/a! d^a p(0) d^a q(0); for the monomial basis
// this is sum_a a! r^(2|a|) p_a q_a.
template <class T>
double pr_inner(const PolyT<T>& p, const PolyT<T>& q, double r) {
    if (p.dim() != q.dim()) throw std::invalid_argument("pr_inner: dimension mismatch");
    double s = 0;
    for (auto& [a, cp] : p.terms()) {
        T cq = q.coef(a);
        if (detail::coef_is_zero(cq)) continue;
        s += midx_factorial(a) * std::pow(r, 2.0 * a.sum()) * detail::coef_to_double(cp) *
             detail::coef_to_double(cq);
    }
    return s;
}

template <class T>
double pr_norm(const PolyT<T>& p, double r) {
    return std::sqrt(std::max(0.0, pr_inner(p, p, r)));
}

}  // namespace kfp
