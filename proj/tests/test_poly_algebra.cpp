#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kfp/harmonic.hpp"
#include "kfp/hermite_newton.hpp"
#include "kfp/lattice.hpp"
#include "kfp/macro_op.hpp"
#include "kfp/multipoly.hpp"
#include "kfp/poly_estimates.hpp"

using namespace kfp;

namespace {

MultiPoly random_rational_poly(std::mt19937& rng, int dim, int deg, bool homogeneous = false) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 5);
    MultiPoly p(dim);
    auto idxs = homogeneous ? enumerate_level(dim, deg) : enumerate_simplex(dim, deg);
    for (auto& a : idxs) p.set(a, Rat(num(rng), den(rng)));
    return p;
}

}  // namespace

TEST_CASE("rational arithmetic") {
    Rat a(3, 6), b(-2, 4);
    CHECK(a == Rat(1, 2));
    CHECK((a + b).is_zero());
    CHECK((a * Rat(4)) == Rat(2));
    CHECK((Rat(7, 3) / Rat(7, 3)) == Rat(1));
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
}

TEST_CASE("pr_inner on monomials") {
    // <x^a, x^b> = a! r^{2|a|} 1_{a=b}
    const double r = 1.7;
    for (int d : {1, 2, 3}) {
        for (auto& a : enumerate_simplex(d, 4))
            for (auto& b : enumerate_simplex(d, 4)) {
                MultiPoly pa = MultiPoly::monomial(d, a, Rat(1));
                MultiPoly pb = MultiPoly::monomial(d, b, Rat(1));
                double got = pr_inner(pa, pb, r);
                double expect = (a == b) ? midx_factorial(a) * std::pow(r, 2.0 * a.sum()) : 0.0;
                CHECK(got == doctest::Approx(expect).epsilon(1e-13));
            }
    }
    MultiPoly one = MultiPoly::constant(2, Rat(1));
    CHECK(pr_inner(one, one, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("pr_inner adjointness of |x|^2 and r^4 Laplacian") {
    std::mt19937 rng(42);
    for (int d : {2, 3})
        for (int trial = 0; trial < 10; ++trial) {
            MultiPoly p = random_rational_poly(rng, d, 5);
            MultiPoly q = random_rational_poly(rng, d, 5);
            for (double r : {0.5, 1.0, 2.0}) {
                double lhs = pr_inner(radius_sq<Rat>(d) * p, q, r);
                double rhs = pr_inner(p, q.laplacian(), r) * std::pow(r, 4);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
            }
        }
}

TEST_CASE("harmonic decomposition of x1^2 in d=2") {
    MultiPoly p = MultiPoly::monomial(2, midx(2), Rat(1));
    auto parts = harmonic_decompose(p);
    REQUIRE(parts.size() == 2);
    MultiPoly h0_expect(2);
    h0_expect.set(midx(2), Rat(1, 2));
    h0_expect.set(midx(0, 2), Rat(-1, 2));
    CHECK((parts[0] - h0_expect).is_zero());
    CHECK(parts[1].coef(MIdx{}) == Rat(1, 2));
    CHECK(parts[0].laplacian().is_zero());
    CHECK((reconstruct_from_harmonics(parts, DiagMetric<Rat>::identity(2)) - p).is_zero());
}

TEST_CASE("harmonic input decomposes to itself") {
    MultiPoly h(2);
    h.set(midx(3), Rat(1));
    h.set(midx(1, 2), Rat(-3));  // x^3 - 3xy^2, harmonic
    REQUIRE(h.laplacian().is_zero());
    auto parts = harmonic_decompose(h);
    REQUIRE(parts.size() == 1);
    CHECK((parts[0] - h).is_zero());
}

TEST_CASE("harmonic decomposition: exactness, orthogonality, linearity of Laplacian") {
    std::mt19937 rng(7);
    for (int d : {2, 3})
        for (int deg = 2; deg <= 8; ++deg)
            for (int trial = 0; trial < 4; ++trial) {
                MultiPoly p = random_rational_poly(rng, d, deg, true);
                auto parts = harmonic_decompose(p);
                for (auto& h : parts) CHECK(h.laplacian().is_zero());
                MultiPoly recon = reconstruct_from_harmonics(parts, DiagMetric<Rat>::identity(d));
                CHECK((recon - p).is_zero());
                CHECK((recon.laplacian() - p.laplacian()).is_zero());
                // components |x|^{2k} h_k are P_r-orthogonal
                std::vector<MultiPoly> embedded;
                MultiPoly q = radius_sq<Rat>(d);
                MultiPoly q_pow = MultiPoly::constant(d, Rat(1));
                for (auto& h : parts) {
                    embedded.push_back(q_pow * h);
                    q_pow = q_pow * q;
                }
                for (size_t i = 0; i < embedded.size(); ++i)
                    for (size_t j = i + 1; j < embedded.size(); ++j) {
                        double na = pr_norm(embedded[i], 1.3), nb = pr_norm(embedded[j], 1.3);
                        if (na == 0 || nb == 0) continue;
                        CHECK(std::abs(pr_inner(embedded[i], embedded[j], 1.3)) / (na * nb) <= 1e-12);
                    }
            }
}

TEST_CASE("S operator: closed forms") {
    for (int d : {1, 2, 3}) {
        MultiPoly one = MultiPoly::constant(d, Rat(1));
        MultiPoly s1 = s_apply(one);
        CHECK((s1 - radius_sq<Rat>(d) * Rat(1, 2 * d)).is_zero());

        MultiPoly x1 = MultiPoly::monomial(d, midx(1), Rat(1));
        MultiPoly sx = s_apply(x1);
        CHECK((sx - radius_sq<Rat>(d) * x1 * Rat(1, 2 * d + 4)).is_zero());
    }
    // d=2: S(x1^2) = |x|^2 (x1^2 - x2^2)/24 + |x|^4/32
    MultiPoly p = MultiPoly::monomial(2, midx(2), Rat(1));
    MultiPoly sp = s_apply(p);
    MultiPoly r2 = radius_sq<Rat>(2);
    MultiPoly diff(2);
    diff.set(midx(2), Rat(1));
    diff.set(midx(0, 2), Rat(-1));
    MultiPoly expect = r2 * diff * Rat(1, 24) + r2 * r2 * Rat(1, 32);
    CHECK((sp - expect).is_zero());
    CHECK((sp.laplacian() - p).is_zero());
}

TEST_CASE("Laplacian composed with S is the identity (exact, deg <= 10)") {
    std::mt19937 rng(99);
    for (int d : {1, 2, 3})
        for (int deg = 0; deg <= 10; ++deg)
            for (int trial = 0; trial < 3; ++trial) {
                MultiPoly p = random_rational_poly(rng, d, deg, true);
                if (p.is_zero()) continue;
                MultiPoly sp = s_apply(p);
                CHECK((sp.laplacian() - p).is_zero());
                // orthogonality of Sp to all harmonics of matching degree
                auto sp_parts = harmonic_decompose(sp);
                CHECK(sp_parts[0].is_zero());
            }
}

TEST_CASE("invlap bound ||Sp|| <= r^2/sqrt(m+1) ||p|| on 1000 random polynomials") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> dim_dist(1, 3);
    std::uniform_int_distribution<int> deg_dist(0, 8);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int d = dim_dist(rng);
        int m = deg_dist(rng);
        MultiPoly p = random_rational_poly(rng, d, m, true);
        if (p.is_zero()) continue;
        for (double r : {0.5, 1.0, 3.0}) {
            double lhs = pr_norm(s_apply(p), r);
            double rhs = r * r / std::sqrt(m + 1.0) * pr_norm(p, r);
            if (lhs > rhs * (1 + 1e-12)) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("macro_apply basics") {
    auto lap = DiffTensors<Rat>::laplacian(2, 4);
    MultiPoly q = radius_sq<Rat>(2);
    MultiPoly out = macro_apply(lap, q);
    CHECK(out.coef(MIdx{}) == Rat(4));  // 2d with d=2
    CHECK(macro_apply(lap, MultiPoly::constant(2, Rat(3))).is_zero());
    MultiPoly deg5 = MultiPoly::monomial(2, midx(5), Rat(1));
    CHECK_THROWS_AS(macro_apply(lap, deg5), InsufficientOrder);
}

TEST_CASE("macro_invert: pure Laplacian, p = 1, d = 2") {
    auto lap = DiffTensors<Rat>::laplacian(2, 4);
    auto res = macro_invert(lap, MultiPoly::constant(2, Rat(1)), 2.0);
    CHECK((res.q - radius_sq<Rat>(2) * Rat(1, 4)).is_zero());
}

TEST_CASE("macro_invert: cubic tensor perturbation, exact postcondition") {
    // tensors = Laplacian + eps * d^3/dx1^3; p = x1
    Rat eps(1, 7);
    auto t = DiffTensors<Rat>::laplacian(2, 4);
    t.coef[midx(3)] = eps;
    MultiPoly p = MultiPoly::monomial(2, midx(1), Rat(1));
    auto res = macro_invert(t, p, 2.0);
    MultiPoly r2 = radius_sq<Rat>(2);
    MultiPoly expect = r2 * p * Rat(1, 8) - r2 * eps * Rat(3, 16);
    CHECK((res.q - expect).is_zero());
    CHECK((macro_apply(t, res.q) - p).is_zero());
}

TEST_CASE("macro_invert postcondition holds symbolically on random tensors") {
    std::mt19937 rng(555);
    std::uniform_int_distribution<int> num(-3, 3);
    for (int d : {1, 2, 3})
        for (int trial = 0; trial < 8; ++trial) {
            DiffTensors<Rat> t;
            t.dim = d;
            t.order = 8;
            // SPD second-order part: diag-dominant symmetric
            for (int i = 0; i < d; ++i) t.coef[MIdx{}.plus(i, 2)] = Rat(3 + std::abs(num(rng)));
            if (d >= 2) t.coef[midx(1, 1)] = Rat(num(rng), 4);
            for (auto& a : enumerate_level(d, 3)) t.coef[a] = Rat(num(rng), 8);
            for (auto& a : enumerate_level(d, 4)) t.coef[a] = Rat(num(rng), 16);
            MultiPoly p = random_rational_poly(rng, d, 4);
            auto res = macro_invert(t, p, 3.0);
            CHECK((macro_apply(t, res.q) - p).is_zero());
        }
}

TEST_CASE("macro_invert norm bound with geometrically decaying random tensors") {
    // ||q||_{P_r} <= C r^2 ||p||_{P_r} for r >= C deg p; fitted C reported
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double fitted = 0;
    for (int d : {1, 2})
        for (int deg = 0; deg <= 5; ++deg)
            for (int trial = 0; trial < 6; ++trial) {
                DiffTensors<double> t;
                t.dim = d;
                t.order = deg + 2;
                for (int i = 0; i < d; ++i) t.coef[MIdx{}.plus(i, 2)] = 1.0;
                double decay = 0.3;
                for (int k = 3; k <= deg + 2; ++k)
                    for (auto& a : enumerate_level(d, k)) t.coef[a] = u(rng) * std::pow(decay, k);
                DPoly p(d);
                for (auto& a : enumerate_simplex(d, deg)) p.set(a, u(rng));
                double r = 4.0 * (deg + 1);
                auto res = macro_invert(t, p, r);
                double resid_norm = pr_norm(macro_apply(t, res.q) - p, r);
                CHECK(resid_norm <= 1e-9 * pr_norm(p, r));
                fitted = std::max(fitted, res.norm_ratio / (r * r));
            }
    CHECK(fitted <= 2.0);  // C of the inversion lemma, fitted
    CHECK_THROWS_AS(macro_invert(DiffTensors<Rat>::laplacian(2, 1), MultiPoly::constant(2, Rat(1)), 1.0),
                    InsufficientOrder);
}

TEST_CASE("macro_invert rejects a singular second-order part") {
    DiffTensors<Rat> t;
    t.dim = 2;
    t.order = 3;
    t.coef[midx(2)] = Rat(1);
    t.coef[midx(0, 2)] = Rat(0);
    CHECK_THROWS_AS(macro_invert(t, MultiPoly::constant(2, Rat(1)), 1.0), DegenerateSecondOrder);
}

TEST_CASE("hermite polynomials") {
    MultiPoly h1 = hermite_poly(2, midx(1));
    CHECK(h1.coef(midx(1)) == Rat(2));
    CHECK(h1.terms().size() == 1);
    auto rep = hermite_checks();
    for (auto& item : rep.items) {
        INFO(item.name, " observed=", item.observed);
        CHECK(item.pass);
    }
}

TEST_CASE("newton polynomials") {
    auto rep = newton_checks();
    for (auto& item : rep.items) {
        INFO(item.name, " observed=", item.observed);
        CHECK(item.pass);
    }
}

TEST_CASE("lattice finite differences") {
    LatticeField f(2, 6);
    for (auto& z : f.points()) f.at(z) = 3.0;  // constant
    CHECK(finite_difference(f, midx(1)).sup_norm() == 0.0);
    CHECK(finite_difference(f, midx(0, 1)).sup_norm() == 0.0);

    LatticeField g(1, 8);
    for (auto& z : g.points()) g.at(z) = static_cast<double>(z[0]) * z[0];
    LatticeField d2 = finite_difference(g, midx(2));
    for (auto& z : d2.points()) CHECK(d2.at(z) == doctest::Approx(2.0));

    // Newton duality on the lattice: D^a N_a = 1
    for (auto& a : std::vector<MIdx>{midx(3), midx(2, 1), midx(1, 2)}) {
        LatticeField nf(2, 8);
        DPoly na = to_dpoly(newton_poly(2, a));
        for (auto& z : nf.points())
            nf.at(z) = na.eval({static_cast<double>(z[0]), static_cast<double>(z[1]), 0});
        LatticeField diff = finite_difference(nf, a);
        for (auto& z : diff.points()) CHECK(diff.at(z) == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(finite_difference(LatticeField(1, 1), midx(3)), DomainTooSmall);
}

TEST_CASE("polynomial estimate suite") {
    auto rep = poly_estimate_suite();
    for (auto& item : rep.items) {
        INFO(item.name, " observed=", item.observed, " bound=", item.bound);
        CHECK(item.pass);
    }
}
