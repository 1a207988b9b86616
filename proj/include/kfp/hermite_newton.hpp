#pragma once

#include <string>
#include <vector>

#include "kfp/multipoly.hpp"

namespace kfp {

// Physicist Hermite polynomials h_a for the weight pi^{-d/2} e^{-|x|^2},
// h_{a+e_i} = 2 x_i h_a - 2 a_i h_{a-e_i}; orthogonality 2^{|a|} a!.
MultiPoly hermite_poly(int dim, const MIdx& alpha);

// Probabilists' Hermite polynomials He_n (weight gamma), orthonormal after
// division by sqrt(n!).
MultiPoly probabilist_hermite_1d(int n);

// Newton basis: N_k(x) = (1/k!) prod_{j=0}^{k-1} (x - j), multivariate by
// products per axis. Forward difference duality D N_k = N_{k-1}.
MultiPoly newton_poly_1d(int k);
MultiPoly newton_poly(int dim, const MIdx& alpha);

// Forward difference of a polynomial along one axis: p(x + e_i) - p(x).
template <class T>
PolyT<T> poly_forward_difference(const PolyT<T>& p, int axis) {
    PolyT<T> shifted(p.dim());
    // substitute x_axis -> x_axis + 1 by binomial expansion
    for (auto& [a, c] : p.terms()) {
        int n = a[axis];
        T binom = T(1);
        for (int k = n; k >= 0; --k) {
            shifted.add_term(a.plus(axis, k - n), c * binom);
            if (k > 0) binom = binom * T(k) / T(n - k + 1);
        }
    }
    return shifted - p;
}

template <class T>
PolyT<T> poly_forward_difference(const PolyT<T>& p, const MIdx& alpha) {
    PolyT<T> r = p;
    for (int i = 0; i < p.dim(); ++i)
        for (int k = 0; k < alpha[i]; ++k) r = poly_forward_difference(r, i);
    return r;
}

struct SelfTestItem {
    std::string name;
    double observed = 0;
    double bound = 0;
    bool pass = false;
};

struct SelfTestReport {
    std::vector<SelfTestItem> items;
    bool all_pass() const {
        for (auto& it : items)
            if (!it.pass) return false;
        return true;
    }
    void add(const std::string& name, double observed, double bound, bool pass) {
        items.push_back({name, observed, bound, pass});
    }
};

// Orthogonality against exact Gauss-Hermite quadrature and the ladder
// recurrence, checked symbolically where exact.
SelfTestReport hermite_checks();

// Defining values, difference duality, and the Newton representation of a
// seeded random polynomial.
SelfTestReport newton_checks();

}  // namespace kfp
