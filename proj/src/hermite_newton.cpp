#include "kfp/hermite_newton.hpp"

#include <random>

#include "kfp/quadrature.hpp"

namespace kfp {

static MultiPoly physicist_hermite_1d_axis(int dim, int axis, int n) {
    MultiPoly h0 = MultiPoly::constant(dim, Rat(1));
    if (n == 0) return h0;
    MultiPoly x = MultiPoly::monomial(dim, MIdx{}.plus(axis, 1), Rat(1));
    MultiPoly hm1 = h0;
    MultiPoly h = x * Rat(2);
    for (int k = 1; k < n; ++k) {
        MultiPoly next = x * h * Rat(2) - hm1 * Rat(2 * k);
        hm1 = h;
        h = next;
    }
    return h;
}

MultiPoly hermite_poly(int dim, const MIdx& alpha) {
    if (alpha.sum() > 12) throw std::invalid_argument("hermite_poly: |alpha| > 12 outside exact range");
    MultiPoly p = MultiPoly::constant(dim, Rat(1));
    for (int i = 0; i < dim; ++i)
        if (alpha[i] > 0) p = p * physicist_hermite_1d_axis(dim, i, alpha[i]);
    return p;
}

MultiPoly probabilist_hermite_1d(int n) {
    MultiPoly x = MultiPoly::monomial(1, midx(1), Rat(1));
    MultiPoly hm1 = MultiPoly::constant(1, Rat(1));
    if (n == 0) return hm1;
    MultiPoly h = x;
    for (int k = 1; k < n; ++k) {
        MultiPoly next = x * h - hm1 * Rat(k);
        hm1 = h;
        h = next;
    }
    return h;
}

MultiPoly newton_poly_1d(int k) {
    if (k > 20) throw std::invalid_argument("newton_poly: k > 20 outside exact range");
    MultiPoly p = MultiPoly::constant(1, Rat(1));
    MultiPoly x = MultiPoly::monomial(1, midx(1), Rat(1));
    for (int j = 0; j < k; ++j) p = p * (x - MultiPoly::constant(1, Rat(j)));
    Rat kfac(1);
    for (int j = 2; j <= k; ++j) kfac *= Rat(j);
    return p * (Rat(1) / kfac);
}

MultiPoly newton_poly(int dim, const MIdx& alpha) {
    MultiPoly p = MultiPoly::constant(dim, Rat(1));
    for (int i = 0; i < dim; ++i) {
        if (alpha[i] == 0) continue;
        MultiPoly axis_p = MultiPoly::constant(dim, Rat(1));
        MultiPoly x = MultiPoly::monomial(dim, MIdx{}.plus(i, 1), Rat(1));
        for (int j = 0; j < alpha[i]; ++j) axis_p = axis_p * (x - MultiPoly::constant(dim, Rat(j)));
        Rat kfac(1);
        for (int j = 2; j <= alpha[i]; ++j) kfac *= Rat(j);
        p = p * axis_p * (Rat(1) / kfac);
    }
    return p;
}

SelfTestReport hermite_checks() {
    SelfTestReport rep;
    const int deg = 6;

    // 1-d orthogonality by Gauss-Hermite with deg+1 nodes.
    {
        Quad1d q = gauss_hermite(deg + 1);
        const double norm = 1.0 / std::sqrt(std::acos(-1.0));
        double worst = 0;
        for (int a = 0; a <= deg; ++a)
            for (int b = 0; b <= deg; ++b) {
                MultiPoly ha = hermite_poly(1, midx(a));
                MultiPoly hb = hermite_poly(1, midx(b));
                double s = 0;
                for (size_t i = 0; i < q.x.size(); ++i)
                    s += q.w[i] * norm * ha.eval({q.x[i], 0, 0}) * hb.eval({q.x[i], 0, 0});
                double expect = (a == b) ? std::pow(2.0, a) * factorial(a) : 0.0;
                double scale = std::pow(2.0, std::max(a, b)) * factorial(std::max(a, b));
                worst = std::max(worst, std::abs(s - expect) / scale);
            }
        rep.add("hermite_orthogonality_1d", worst, 1e-12, worst <= 1e-12);
    }

    // Multivariate orthogonality, d = 2, |alpha| <= 4.
    {
        Quad1d q = gauss_hermite(deg + 1);
        const double norm = 1.0 / std::acos(-1.0);
        auto idxs = enumerate_simplex(2, 4);
        double worst = 0;
        for (auto& a : idxs)
            for (auto& b : idxs) {
                MultiPoly ha = hermite_poly(2, a);
                MultiPoly hb = hermite_poly(2, b);
                double s = 0;
                for (size_t i = 0; i < q.x.size(); ++i)
                    for (size_t j = 0; j < q.x.size(); ++j)
                        s += q.w[i] * q.w[j] * norm * ha.eval({q.x[i], q.x[j], 0}) * hb.eval({q.x[i], q.x[j], 0});
                double expect = (a == b) ? std::pow(2.0, a.sum()) * midx_factorial(a) : 0.0;
                double scale = std::pow(2.0, std::max(a.sum(), b.sum())) *
                               std::max(midx_factorial(a), midx_factorial(b));
                worst = std::max(worst, std::abs(s - expect) / scale);
            }
        rep.add("hermite_orthogonality_2d", worst, 1e-12, worst <= 1e-12);
    }

    // Recurrence h_{a+e_i} = 2 x_i h_a - 2 a_i h_{a-e_i}, symbolic, d = 2.
    {
        bool ok = true;
        for (auto& a : enumerate_simplex(2, deg - 1))
            for (int i = 0; i < 2; ++i) {
                MultiPoly lhs = hermite_poly(2, a.plus(i, 1));
                MultiPoly xi = MultiPoly::monomial(2, MIdx{}.plus(i, 1), Rat(2));
                MultiPoly rhs = xi * hermite_poly(2, a);
                if (a[i] > 0) rhs = rhs - hermite_poly(2, a.plus(i, -1)) * Rat(2 * a[i]);
                if (!(lhs - rhs).is_zero()) ok = false;
            }
        rep.add("hermite_recurrence", ok ? 0.0 : 1.0, 0.0, ok);
    }

    // h_a = (-1)^{|a|} G0^{-1} d^a G0 checked through the derivative relation
    // d/dx (h_a G0) = -h_{a+e} G0, i.e. h_{a+e} = 2x h_a - h_a'.
    {
        bool ok = true;
        for (int a = 0; a < deg; ++a) {
            MultiPoly lhs = hermite_poly(1, midx(a + 1));
            MultiPoly rhs = MultiPoly::monomial(1, midx(1), Rat(2)) * hermite_poly(1, midx(a)) -
                            hermite_poly(1, midx(a)).derivative(0);
            if (!(lhs - rhs).is_zero()) ok = false;
        }
        rep.add("hermite_gaussian_derivative", ok ? 0.0 : 1.0, 0.0, ok);
    }

    return rep;
}

SelfTestReport newton_checks() {
    SelfTestReport rep;

    {
        MultiPoly x = MultiPoly::monomial(1, midx(1), Rat(1));
        bool ok = newton_poly_1d(0) .coef(midx(0)) == Rat(1);
        ok = ok && (newton_poly_1d(1) - x).is_zero();
        MultiPoly n2 = x * (x - MultiPoly::constant(1, Rat(1))) * Rat(1, 2);
        ok = ok && (newton_poly_1d(2) - n2).is_zero();
        rep.add("newton_defining_values", ok ? 0.0 : 1.0, 0.0, ok);
    }

    {
        bool ok = true;
        for (int k = 1; k <= 8; ++k) {
            MultiPoly lhs = poly_forward_difference(newton_poly_1d(k), 0);
            if (!(lhs - newton_poly_1d(k - 1)).is_zero()) ok = false;
        }
        rep.add("newton_difference_duality", ok ? 0.0 : 1.0, 0.0, ok);
    }

    // p = sum_a D^a p(0) N_a for a seeded random degree-5 polynomial, d = 2.
    {
        std::mt19937 rng(12345);
        std::uniform_int_distribution<int> dist(-9, 9);
        MultiPoly p(2);
        for (auto& a : enumerate_simplex(2, 5)) p.set(a, Rat(dist(rng)));
        MultiPoly recon(2);
        for (auto& a : enumerate_simplex(2, 5)) {
            MultiPoly diff = poly_forward_difference(p, a);
            Rat at_zero = diff.coef(MIdx{});
            if (!at_zero.is_zero()) recon = recon + newton_poly(2, a) * at_zero;
        }
        bool ok = (recon - p).is_zero();
        rep.add("newton_representation", ok ? 0.0 : 1.0, 0.0, ok);
    }

    return rep;
}

}  // namespace kfp
