#include "kfp/poly_estimates.hpp"

#include <cmath>
#include <random>

#include "kfp/quadrature.hpp"

namespace kfp {

namespace {

double signed_upper_moment(int n, double a) {
    // int_a^inf t^n e^{-t^2} dt for any real a
    if (a >= 0) return upper_gaussian_moment(n, a);
    double full = full_gaussian_moment(n);
    double tail = upper_gaussian_moment(n, -a);
    return (n % 2 == 0) ? full - tail : full + tail;  // reflect t -> -t
}

double interval_moment(int n, double a, double b) { return signed_upper_moment(n, a) - signed_upper_moment(n, b); }

// int x^n Gamma(t, x - y) dx over one axis restricted to [lo, hi]
// (lo/hi may be +-inf). Substitution x = y + 2 sqrt(t) u.
double axis_moment(int n, double t, double y, double lo, double hi) {
    const double s = 2.0 * std::sqrt(t);
    const double ul = std::isinf(lo) ? -1e300 : (lo - y) / s;
    const double uh = std::isinf(hi) ? 1e300 : (hi - y) / s;
    // (y + s u)^n expanded binomially
    double total = 0;
    double binom = 1;
    for (int k = 0; k <= n; ++k) {
        double mk = std::isinf(lo) && std::isinf(hi) ? full_gaussian_moment(k) : interval_moment(k, ul, uh);
        total += binom * std::pow(y, n - k) * std::pow(s, k) * mk;
        binom = binom * (n - k) / (k + 1.0);
    }
    return total / std::sqrt(std::acos(-1.0));  // (4 pi t)^{-1/2} * s = pi^{-1/2}
}

}  // namespace

double heat_weighted_integral(const DPoly& p, double t, const std::array<double, kMaxDim>& y) {
    double s = 0;
    for (auto& [a, c] : p.terms()) {
        double term = c;
        for (int i = 0; i < p.dim(); ++i)
            term *= axis_moment(a[i], t, y[i], -std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity());
        s += term;
    }
    return s;
}

double heat_weighted_integral_cube(const DPoly& p, double t, const std::array<double, kMaxDim>& y, double r) {
    double s = 0;
    for (auto& [a, c] : p.terms()) {
        double term = c;
        for (int i = 0; i < p.dim(); ++i) term *= axis_moment(a[i], t, y[i], -0.5 * r, 0.5 * r);
        s += term;
    }
    return s;
}

double deriv_tensor_norm(const DPoly& p, int n) {
    double s = 0;
    for (auto& b : enumerate_level(p.dim(), n)) {
        double d = p.derivative(b).coef(MIdx{});
        s += factorial(n) / midx_factorial(b) * d * d;
    }
    return std::sqrt(s);
}

double diff_tensor_norm(const DPoly& p, int n) {
    double s = 0;
    for (auto& b : enumerate_level(p.dim(), n)) {
        double d = poly_forward_difference(p, b).coef(MIdx{});
        s += factorial(n) / midx_factorial(b) * d * d;
    }
    return std::sqrt(s);
}

namespace {

DPoly random_poly(std::mt19937& rng, int dim, int deg) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DPoly p(dim);
    for (auto& a : enumerate_simplex(dim, deg)) p.set(a, u(rng));
    return p;
}

DPoly grad_pgamma_sq(const DPoly& p, double t, const std::array<double, kMaxDim>& y) {
    // |grad(p Gamma)/Gamma|^2 = sum_i (d_i p - p (x_i - y_i)/(2t))^2
    DPoly out(p.dim());
    for (int i = 0; i < p.dim(); ++i) {
        DPoly xi = DPoly::monomial(p.dim(), MIdx{}.plus(i, 1), 1.0) - DPoly::constant(p.dim(), y[i]);
        DPoly gi = p.derivative(i) - p * xi * (1.0 / (2.0 * t));
        out = out + gi * gi;
    }
    return out;
}

}  // namespace

SelfTestReport poly_estimate_suite(double tol) {
    SelfTestReport rep;
    std::mt19937 rng(777);
    const std::array<double, kMaxDim> y0{0, 0, 0};
    const std::array<double, kMaxDim> y1{0.7, -0.3, 0.2};

    // (1) heat-kernel gradient bound, explicit constant 2(m+d)/t.
    {
        double worst = 0;
        for (int dim = 1; dim <= 3; ++dim)
            for (int deg = 0; deg <= 6; ++deg)
                for (double t : {0.5, 1.0, 4.0})
                    for (auto& y : {y0, y1})
                        for (int rep_i = 0; rep_i < 4; ++rep_i) {
                            DPoly p = random_poly(rng, dim, deg);
                            double lhs = heat_weighted_integral(grad_pgamma_sq(p, t, y), t, y);
                            double rhs = 2.0 * (deg + dim) / t * heat_weighted_integral(p * p, t, y);
                            worst = std::max(worst, lhs / rhs);
                        }
        rep.add("gradient_bound_ratio", worst, 1.0 + tol, worst <= 1.0 + tol);
    }

    // p = 1 slack case: LHS = d/(2t), RHS = 2d/t, slack factor 4.
    {
        const int dim = 2;
        const double t = 1.0;
        DPoly one = DPoly::constant(dim, 1.0);
        double lhs = heat_weighted_integral(grad_pgamma_sq(one, t, y0), t, y0);
        double slack = (2.0 * dim / t) / lhs;
        bool pass = std::abs(lhs - dim / (2.0 * t)) < 1e-12 && slack >= 4.0 - 1e-12;
        rep.add("gradient_bound_constant_slack", slack, 4.0, pass);
    }

    // (2) tail cutoff, explicit e^{-r^2/16t} for r >= sqrt(64 m t). The
    // cutoff cube is the one of in-radius r (the per-axis cutoff the proof
    // integrates from); with the side-r cube the stated constant fails.
    {
        double worst = 0;
        for (int dim = 1; dim <= 3; ++dim)
            for (int deg = 1; deg <= 6; ++deg)
                for (double t : {0.5, 1.0}) {
                    double r = std::sqrt(64.0 * deg * t);
                    for (int rep_i = 0; rep_i < 4; ++rep_i) {
                        DPoly p = random_poly(rng, dim, deg);
                        DPoly p2 = p * p;
                        double whole = heat_weighted_integral(p2, t, y0);
                        double inside = heat_weighted_integral_cube(p2, t, y0, 2.0 * r);
                        double ratio = (whole - inside) / whole;
                        worst = std::max(worst, ratio / std::exp(-r * r / (16.0 * t)));
                    }
                }
        rep.add("tail_cutoff_ratio", worst, 1.0, worst <= 1.0);
    }

    // (3) Markov-type gradient bound, fitted C.
    {
        double fitted = 0;
        for (int dim = 1; dim <= 3; ++dim)
            for (int deg = 1; deg <= 6; ++deg)
                for (double t : {0.5, 1.0, 4.0})
                    for (int rep_i = 0; rep_i < 4; ++rep_i) {
                        DPoly p = random_poly(rng, dim, deg);
                        DPoly g2(dim);
                        for (int i = 0; i < dim; ++i) {
                            DPoly gi = p.derivative(i);
                            g2 = g2 + gi * gi;
                        }
                        double lhs = heat_weighted_integral(g2, t, y0);
                        double rhs = heat_weighted_integral(p * p, t, y0);
                        fitted = std::max(fitted, t * lhs / (deg * rhs));
                    }
        // regression-locked fitted constant (10% headroom)
        const double golden = 0.50;
        rep.add("markov_gradient_fitted_C", fitted, golden * 1.1, fitted <= golden * 1.1);
    }

    // (4) |grad^n p(0)| <= sum_k C^k |D^k p(0)|, fitted C.
    {
        double fitted = 0;
        for (int dim = 1; dim <= 3; ++dim)
            for (int deg = 1; deg <= 6; ++deg)
                for (int rep_i = 0; rep_i < 6; ++rep_i) {
                    DPoly p = random_poly(rng, dim, deg);
                    for (int n = 0; n <= deg; ++n) {
                        double lhs = deriv_tensor_norm(p, n);
                        if (lhs == 0) continue;
                        // smallest C with lhs <= sum_{k=n}^deg C^k |D^k p(0)|,
                        // located by bisection
                        auto rhs_at = [&](double C) {
                            double s = 0;
                            for (int k = n; k <= deg; ++k) s += std::pow(C, k) * diff_tensor_norm(p, k);
                            return s;
                        };
                        double lo = 1e-3, hi = 64.0;
                        for (int it = 0; it < 60; ++it) {
                            double mid = 0.5 * (lo + hi);
                            (rhs_at(mid) >= lhs ? hi : lo) = mid;
                        }
                        fitted = std::max(fitted, hi);
                    }
                }
        const double golden = 1.0;
        rep.add("deriv_vs_difference_fitted_C", fitted, golden * 1.1, fitted <= golden * 1.1);
    }

    // Equality pattern for p = N_a: D^b N_a(0) = 1_{a=b} for |b| <= |a|.
    {
        bool ok = true;
        for (auto& a : enumerate_simplex(2, 5)) {
            DPoly p = to_dpoly(newton_poly(2, a)).convert<double>();
            for (auto& b : enumerate_simplex(2, a.sum())) {
                double d = poly_forward_difference(p, b).coef(MIdx{});
                double expect = (a == b) ? 1.0 : 0.0;
                if (std::abs(d - expect) > 1e-12) {
                    // differences of strictly smaller order vanish; mixed
                    // same-order ones must also vanish
                    if (b.sum() < a.sum() || b.sum() == a.sum()) ok = false;
                }
            }
        }
        rep.add("newton_difference_identity_pattern", ok ? 0.0 : 1.0, 0.0, ok);
    }

    // (5) sup-norm vs mean-L2 growth, fitted C.
    {
        double fitted = 0;
        for (int dim = 1; dim <= 2; ++dim)
            for (int deg = 1; deg <= 6; ++deg)
                for (int rep_i = 0; rep_i < 4; ++rep_i) {
                    DPoly p = random_poly(rng, dim, deg);
                    double r1 = 8.0 * deg, r2 = 4.0 * r1;
                    // mean L2 over Q_{r1} by Gauss-Legendre, exact
                    Quad1d gl = gauss_legendre(deg + 2, -0.5 * r1, 0.5 * r1);
                    double l2 = 0;
                    if (dim == 1) {
                        for (size_t i = 0; i < gl.x.size(); ++i) {
                            double v = p.eval({gl.x[i], 0, 0});
                            l2 += gl.w[i] * v * v;
                        }
                        l2 /= r1;
                    } else {
                        for (size_t i = 0; i < gl.x.size(); ++i)
                            for (size_t j = 0; j < gl.x.size(); ++j) {
                                double v = p.eval({gl.x[i], gl.x[j], 0});
                                l2 += gl.w[i] * gl.w[j] * v * v;
                            }
                        l2 /= r1 * r1;
                    }
                    l2 = std::sqrt(l2);
                    double sup = 0;
                    const int grid = 33;
                    for (int gi = 0; gi < grid; ++gi)
                        for (int gj = 0; gj < (dim == 2 ? grid : 1); ++gj) {
                            double xx = -0.5 * r2 + r2 * gi / (grid - 1.0);
                            double yy = dim == 2 ? -0.5 * r2 + r2 * gj / (grid - 1.0) : 0.0;
                            sup = std::max(sup, std::abs(p.eval({xx, yy, 0})));
                        }
                    fitted = std::max(fitted, std::pow(sup / l2, 1.0 / deg) * r1 / r2);
                }
        const double golden = 2.35;
        rep.add("sup_vs_meanl2_fitted_C", fitted, golden * 1.1, fitted <= golden * 1.1);
    }

    return rep;
}

}  // namespace kfp
