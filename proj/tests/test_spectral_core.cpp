#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kfp/hermite_newton.hpp"
#include "kfp/quadrature.hpp"
#include "kfp/solver.hpp"
#include "kfp/spectral_operator.hpp"

using namespace kfp;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PhaseField random_real_field(BasisPtr b, unsigned seed, int max_k, int max_n) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PhaseField f(b);
    for (long kf = 0; kf < b->k_count(); ++kf) {
        MIdx k = b->k_of(kf);
        if (k.max_abs() > max_k) continue;
        for (auto& n : b->velocity_indices()) {
            if (n.sum() > max_n) continue;
            f.set_coef(k, n, cplx(u(rng), u(rng)));
        }
    }
    f.symmetrize_reality();
    return f;
}

// Pointwise collocation of L via polynomial Hermite tables; an independent
// route from the ladder-index assembly.
struct CollocationOracle {
    const Potential& pot;
    const FrictionMatrix& a;
    BasisPtr b;
    std::vector<std::vector<double>> h_coef, dh_coef, d2h_coef;  // per 1-d order

    CollocationOracle(const Potential& p, const FrictionMatrix& fr, BasisPtr basis) : pot(p), a(fr), b(basis) {
        int nv = b->nv();
        for (int n = 0; n <= nv; ++n) {
            MultiPoly he = probabilist_hermite_1d(n);
            double inv_sqrt_fact = 1.0 / std::sqrt(factorial(n));
            auto dump = [&](const MultiPoly& q) {
                std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
                for (auto& [aa, cc] : q.terms()) c[aa[0]] = cc.to_double() * inv_sqrt_fact;
                return c;
            };
            h_coef.push_back(dump(he));
            dh_coef.push_back(dump(he.derivative(0)));
            d2h_coef.push_back(dump(he.derivative(0, 2)));
        }
    }

    static double horner(const std::vector<double>& c, double v) {
        double s = 0;
        for (size_t i = c.size(); i-- > 0;) s = s * v + c[i];
        return s;
    }

    // value of d^order/dv_axis^order of the Hermite product at v
    double hermite_prod(const MIdx& n, const std::array<double, kMaxDim>& v, int axis, int order) const {
        double t = 1;
        for (int i = 0; i < b->dim(); ++i) {
            const auto& tab = (i == axis) ? (order == 1 ? dh_coef[n[i]] : (order == 2 ? d2h_coef[n[i]] : h_coef[n[i]]))
                                          : h_coef[n[i]];
            t *= horner(tab, v[i]);
        }
        return t;
    }

    double mixed_second(const MIdx& n, const std::array<double, kMaxDim>& v, int ax1, int ax2) const {
        if (ax1 == ax2) return hermite_prod(n, v, ax1, 2);
        double t = 1;
        for (int i = 0; i < b->dim(); ++i) {
            const auto& tab = (i == ax1 || i == ax2) ? dh_coef[n[i]] : h_coef[n[i]];
            t *= horner(tab, v[i]);
        }
        return t;
    }

    double eval_L(const PhaseField& f, const std::array<double, kMaxDim>& x,
                  const std::array<double, kMaxDim>& v) const {
        const int d = b->dim();
        const auto& vidx = b->velocity_indices();
        const long nc = b->n_count();
        Eigen::MatrixXd amat = a.eval(x);
        std::array<double, kMaxDim> gradH{};
        for (int i = 0; i < d; ++i) gradH[i] = pot.grad_eval(i, x);

        cplx total = 0;
        for (long kf = 0; kf < b->k_count(); ++kf) {
            MIdx k = b->k_of(kf);
            double phase = 0;
            for (int i = 0; i < d; ++i) phase += k[i] * x[i];
            cplx e = std::polar(1.0, kTwoPi * phase);
            cplx sum = 0;
            for (long p = 0; p < nc; ++p) {
                cplx c = f.coeffs()[kf * nc + p];
                if (c == 0.0) continue;
                const MIdx& n = vidx[p];
                double term = 0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        if (amat(i, j) == 0) continue;
                        term += amat(i, j) * (-mixed_second(n, v, i, j) + v[i] * hermite_prod(n, v, j, 1));
                    }
                for (int j = 0; j < d; ++j) term += gradH[j] * hermite_prod(n, v, j, 1);
                cplx val = term;
                // transport: -v . grad_x picks up 2 pi i k_j from the mode
                double h0 = hermite_prod(n, v, -1, 0);
                for (int j = 0; j < d; ++j) val -= v[j] * cplx(0.0, kTwoPi * k[j]) * h0;
                sum += c * val;
            }
            total += e * sum;
        }
        return total.real();
    }
};

}  // namespace

TEST_CASE("number operator eigenfunction: L v1 = v1 for H=0, a=I") {
    for (int d : {1, 2}) {
        auto b = make_basis(d, 2, 6);
        auto op = assemble_operator(Potential::zero(d), FrictionMatrix::identity(d), b);
        PhaseField v1 = PhaseField::hermite_unit(b, midx(1));
        PhaseField lv = apply(op, v1);
        CHECK((lv - v1).norm() == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("transport on a pure Fourier mode") {
    auto b = make_basis(1, 2, 6);
    auto op = assemble_operator(Potential::zero(1), FrictionMatrix::identity(1), b);
    // f = e^{2 pi i x}: single complex coefficient at (k=e1, n=0)
    PhaseField f(b);
    f.set_coef(midx(1), MIdx{}, 1.0);
    PhaseField lf = apply(op, f);
    CHECK(std::abs(lf.coef(midx(1), midx(1)) - cplx(0.0, -kTwoPi)) < 1e-14);
    double off = lf.norm() - std::abs(lf.coef(midx(1), midx(1)));
    CHECK(std::abs(off) < 1e-14);
}

TEST_CASE("apply: linearity, kernel, associativity") {
    auto b = make_basis(1, 4, 8);
    Potential pot = Potential::cosine(1, 0.8);
    auto op = assemble_operator(pot, FrictionMatrix::identity(1), b);

    PhaseField zero(b);
    CHECK(apply(op, zero).norm() == 0.0);

    PhaseField one = PhaseField::constant(b, 1.0);
    CHECK(apply(op, one).norm() == 0.0);  // exact in the ladder arithmetic

    PhaseField f = random_real_field(b, 3, 3, 6);
    PhaseField twice = apply(op, apply(op, f));
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> sq = op.mat * op.mat;
    Eigen::VectorXcd viasq = sq * f.coeffs();
    CHECK((twice.coeffs() - viasq).norm() <= 1e-12 * std::max(1.0, viasq.norm()));

    PhaseField g = random_real_field(b, 4, 3, 6);
    PhaseField sum = apply(op, f + g) - (apply(op, f) + apply(op, g));
    CHECK(sum.norm() < 1e-13);
}

TEST_CASE("assembled operator matches the collocation oracle") {
    Potential pot = Potential::cosine(1, 1.3);
    FrictionMatrix a = FrictionMatrix::identity(1);
    auto b = make_basis(1, 6, 10);
    auto op = assemble_operator(pot, a, b);
    // bandlimited input: headroom of one Hermite degree and K_H Fourier modes
    PhaseField f = random_real_field(b, 11, b->nx() - pot.max_mode(), b->nv() - 1);
    PhaseField lf = apply(op, f);

    CollocationOracle oracle(pot, a, b);
    Quad1d gh = gauss_hermite_gamma(b->nv() + 4);
    const int mx = 4 * b->nx() + 3;
    double num = 0, den = 0;
    for (int ix = 0; ix < mx; ++ix) {
        std::array<double, kMaxDim> x{static_cast<double>(ix) / mx, 0, 0};
        for (size_t q = 0; q < gh.x.size(); ++q) {
            std::array<double, kMaxDim> v{gh.x[q], 0, 0};
            double direct = oracle.eval_L(f, x, v);
            double assembled = lf.eval(x, v);
            double wq = gh.w[q] / mx;
            num += wq * (direct - assembled) * (direct - assembled);
            den += wq * direct * direct;
        }
    }
    CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("collocation agreement for x-dependent friction, d=2") {
    Potential pot = Potential::cosine(2, 0.7, midx(1, 0));
    FrictionMatrix a = FrictionMatrix::constant((Eigen::MatrixXd(2, 2) << 1.5, 0.2, 0.2, 1.0).finished());
    a.set_mode(0, 0, midx(1, 0), cplx(0.1, 0.05));
    a.validate();
    auto b = make_basis(2, 3, 5);
    auto op = assemble_operator(pot, a, b);
    PhaseField f = random_real_field(b, 21, b->nx() - 1, b->nv() - 1);
    PhaseField lf = apply(op, f);

    CollocationOracle oracle(pot, a, b);
    Quad1d gh = gauss_hermite_gamma(b->nv() + 3);
    const int mx = 4 * b->nx() + 3;
    double num = 0, den = 0;
    for (int ix = 0; ix < mx; ++ix)
        for (int iy = 0; iy < mx; ++iy) {
            std::array<double, kMaxDim> x{static_cast<double>(ix) / mx, static_cast<double>(iy) / mx, 0};
            for (size_t q1 = 0; q1 < gh.x.size(); q1 += 3)
                for (size_t q2 = 0; q2 < gh.x.size(); q2 += 3) {
                    std::array<double, kMaxDim> v{gh.x[q1], gh.x[q2], 0};
                    double direct = oracle.eval_L(f, x, v);
                    double assembled = lf.eval(x, v);
                    double wq = gh.w[q1] * gh.w[q2] / (mx * mx);
                    num += wq * (direct - assembled) * (direct - assembled);
                    den += wq * direct * direct;
                }
        }
    CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("assemble_operator rejects bad inputs") {
    CHECK_THROWS_AS(assemble_operator(Potential::cosine(1, 1.0, midx(9)), FrictionMatrix::identity(1),
                                      make_basis(1, 2, 4)),
                    std::invalid_argument);
    FrictionMatrix neg = FrictionMatrix::constant((Eigen::MatrixXd(1, 1) << -1.0).finished());
    CHECK_THROWS_AS(assemble_operator(Potential::zero(1), neg, make_basis(1, 2, 4)), std::invalid_argument);
    auto op = assemble_operator(Potential::zero(1), FrictionMatrix::identity(1), make_basis(1, 2, 4));
    PhaseField wrong(make_basis(1, 3, 4));
    CHECK_THROWS_AS(apply(op, wrong), CutMismatch);
}

TEST_CASE("Parseval: coefficient norm equals quadrature L2 norm") {
    Potential pot = Potential::zero(1);
    auto b = make_basis(1, 5, 9);
    PhaseField f = random_real_field(b, 5, 5, 9);
    Quad1d gh = gauss_hermite_gamma(b->nv() + 1);
    const int mx = 2 * (2 * b->nx()) + 3;
    double q = 0;
    for (int ix = 0; ix < mx; ++ix) {
        std::array<double, kMaxDim> x{static_cast<double>(ix) / mx, 0, 0};
        for (size_t iq = 0; iq < gh.x.size(); ++iq) {
            double val = f.eval(x, {gh.x[iq], 0, 0});
            q += gh.w[iq] / mx * val * val;
        }
    }
    CHECK(std::sqrt(q) == doctest::Approx(f.norm()).epsilon(1e-10));
    (void)pot;
}

TEST_CASE("collision part is positive semidefinite for constant a") {
    for (int d : {1, 2}) {
        Eigen::MatrixXd am = d == 1 ? (Eigen::MatrixXd(1, 1) << 1.7).finished()
                                    : (Eigen::MatrixXd(2, 2) << 2.0, 0.6, 0.6, 1.1).finished();
        auto b = make_basis(d, 2, 6);
        std::mt19937 rng(17);
        for (int trial = 0; trial < 50; ++trial) {
            PhaseField f = random_real_field(b, rng(), 2, 6);
            // <f, sum a_ij A*_i A_j f> = sum_ij a_ij <A_i f, A_j f>
            double quad = 0;
            std::vector<PhaseField> af;
            for (int i = 0; i < d; ++i) af.push_back(f.annihilate(i));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    quad += am(i, j) * af[i].coeffs().dot(af[j].coeffs()).real();
            CHECK(quad >= -1e-12 * f.coeffs().squaredNorm());
        }
    }
}

TEST_CASE("inner_product_m: normalization and Gaussian moments") {
    Potential pot = Potential::cosine(1, 1.0);
    auto b = make_basis(1, 6, 8);
    PhaseField one = PhaseField::constant(b, 1.0);
    CHECK(inner_product_m(one, one, pot) == doctest::Approx(1.0).epsilon(1e-12));
    PhaseField v1 = PhaseField::hermite_unit(b, midx(1));
    CHECK(inner_product_m(v1, v1, pot) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inner_product_m(v1, one, pot) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dm average of cos(2 pi x) matches Bessel ratio and quadrature") {
    for (double lambda : {0.5, 1.0, 2.0}) {
        Potential pot = Potential::cosine(1, lambda);
        auto b = make_basis(1, 8, 4);
        PhaseField cosf(b);
        cosf.set_coef(midx(1), MIdx{}, 0.5);
        cosf.set_coef(midx(-1), MIdx{}, 0.5);
        PhaseField one = PhaseField::constant(b, 1.0);
        double got = inner_product_m(cosf, one, pot);

        double expect_bessel = -std::cyl_bessel_i(1, lambda) / std::cyl_bessel_i(0, lambda);
        // independent quadrature oracle
        const int m = 4096;
        double num = 0, den = 0;
        for (int i = 0; i < m; ++i) {
            double x = static_cast<double>(i) / m;
            double w = std::exp(-lambda * std::cos(kTwoPi * x));
            num += std::cos(kTwoPi * x) * w;
            den += w;
        }
        CHECK(got == doctest::Approx(num / den).epsilon(1e-11));
        CHECK(got == doctest::Approx(expect_bessel).epsilon(1e-10));
    }
}

TEST_CASE("solve_mean_zero: free-case correctors are exact") {
    auto b = make_basis(1, 0, 8);
    Potential pot = Potential::zero(1);
    auto op = assemble_operator(pot, FrictionMatrix::identity(1), b);
    PhaseField rhs = PhaseField::hermite_unit(b, midx(1));
    auto res = solve_mean_zero(op, pot, rhs);
    CHECK(std::abs(res.phi.coef(MIdx{}, midx(1)) - cplx(1.0)) < 1e-8);
    PhaseField diff = res.phi - rhs;
    CHECK(diff.norm() < 1e-8);
}

TEST_CASE("solve_mean_zero: constant anisotropic friction gives a^{-1} v") {
    Eigen::MatrixXd am(2, 2);
    am << 2.0, 0.5, 0.5, 1.0;
    auto b = make_basis(2, 0, 6);
    Potential pot = Potential::zero(2);
    auto op = assemble_operator(pot, FrictionMatrix::constant(am), b);
    Eigen::MatrixXd ainv = am.inverse();
    for (int i = 0; i < 2; ++i) {
        PhaseField rhs = PhaseField::hermite_unit(b, MIdx{}.plus(i, 1));
        auto res = solve_mean_zero(op, pot, rhs);
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(res.phi.coef(MIdx{}, MIdx{}.plus(j, 1)) - cplx(ainv(j, i))) < 1e-9);
    }
}

TEST_CASE("solve_mean_zero: cosine potential, residual and refinement stability") {
    Potential pot = Potential::cosine(1, 1.0);
    FrictionMatrix a = FrictionMatrix::identity(1);
    auto solve_at = [&](int nv) {
        auto b = make_basis(1, 8, nv);
        auto op = assemble_operator(pot, a, b);
        PhaseField rhs = PhaseField::hermite_unit(b, midx(1));
        return solve_mean_zero(op, pot, rhs);
    };
    // Hermite tails of kinetic correctors decay sub-exponentially (the
    // transport resolvent has v-poles at distance ~ 1/(2 pi |k|)), so the
    // 1e-6 refinement stability needs cuts past the tail crossover.
    auto r1 = solve_at(120);
    CHECK(r1.rel_residual <= 1e-8);
    CHECK(std::abs(dm_integral(r1.phi, pot)) < 1e-12);
    auto r2 = solve_at(128);
    PhaseField diff = r2.phi - r1.phi.embedded(r2.phi.basis());
    CHECK(diff.norm() < 1e-6);
}

TEST_CASE("solve_mean_zero rejects incompatible right-hand sides") {
    auto b = make_basis(1, 4, 6);
    Potential pot = Potential::cosine(1, 0.5);
    auto op = assemble_operator(pot, FrictionMatrix::identity(1), b);
    PhaseField rhs = PhaseField::constant(b, 1.0);  // dm-mean 1
    CHECK_THROWS_AS(solve_mean_zero(op, pot, rhs), IncompatibleRhs);
}

TEST_CASE("reality invariant maintained by operations") {
    auto b = make_basis(1, 4, 6);
    PhaseField f = random_real_field(b, 9, 4, 6);
    CHECK(f.reality_defect() < 1e-15);
    Potential pot = Potential::cosine(1, 0.9);
    auto op = assemble_operator(pot, FrictionMatrix::identity(1), b);
    CHECK(apply(op, f).reality_defect() < 1e-13);
    CHECK(f.mul_v(0).reality_defect() < 1e-15);
    CHECK(f.annihilate(0).reality_defect() < 1e-15);
    CHECK(f.dx(0).reality_defect() < 1e-15);
}
