#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kinst/eps_series.hpp"
#include "kinst/factored.hpp"
#include "kinst/laurent.hpp"
#include "kinst/rat_frac.hpp"
#include "kinst/trunc_ring.hpp"

using namespace kinst;

namespace {

ExpPoly e1(long q = 4) { return ExpPoly::exp_quarters(kEps1, q); }
ExpPoly e2(long q = 4) { return ExpPoly::exp_quarters(kEps2, q); }
ExpPoly ea(int alpha, long q = 4) { return ExpPoly::exp_quarters(a_var(alpha), q); }

ExpPoly random_poly(std::mt19937& rng, int nvars = 3) {
    std::uniform_int_distribution<int> nterms(1, 4), expo(-4, 4), coeff(-5, 5);
    ExpPoly p;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        ExpKey k;
        for (int v = 0; v < nvars; ++v) k.set(v, 2 * expo(rng));
        int c = coeff(rng);
        if (c != 0) p = p + ExpPoly::monomial(k, Rat(c));
    }
    return p;
}

} // namespace

TEST_CASE("dual negates exponents") {
    CHECK(e1().negate_exponents() == e1(-4));
    ExpPoly p = e1() + e2(8) * Rat(3);
    ExpPoly d = p.negate_exponents();
    CHECK(d == e1(-4) + e2(-8) * Rat(3));
    CHECK(d.negate_exponents() == p);
}

TEST_CASE("product collapses on the lattice") {
    CHECK((ExpPoly::one() + e2()) * (ExpPoly::one() - e2()) == ExpPoly::one() - e2(8));
    CHECK(e1(2) * e1(2) == e1(4)); // e^{eps1/2} · e^{eps1/2} = e^{eps1}
}

TEST_CASE("fraction arithmetic is formal") {
    RatFrac f(ExpPoly::one(), ExpPoly::one() - e1(-4));
    RatFrac z = RatFrac::zero();
    RatFrac s = f + z;
    CHECK(frac_equal(s, f));
    CHECK(s.den == f.den * ExpPoly::one()); // common denominator by product

    RatFrac x(e1(), e2());
    RatFrac y(e2(), e1());
    CHECK(frac_equal(x * y, RatFrac::one()));

    RatFrac g(ExpPoly::one(), ExpPoly::one() - e2(-4));
    RatFrac prod = f * g;
    CHECK(prod.den == (ExpPoly::one() - e1(-4)) * (ExpPoly::one() - e2(-4)));

    CHECK_THROWS_AS(f / z, DivisionByZero);
}

TEST_CASE("cross-multiplication equality") {
    // (1-e^{2 eps1})/(1+e^{eps1}) = (1-e^{eps1})
    RatFrac lhs(ExpPoly::one() - e1(8), ExpPoly::one() + e1());
    RatFrac rhs(ExpPoly::one() - e1(), ExpPoly::one());
    CHECK(frac_equal(lhs, rhs, EqualMode::CrossMul));
    CHECK(frac_equal(lhs, rhs, EqualMode::Grid));

    RatFrac f(ExpPoly::one(), ExpPoly::one() - e1(-4));
    RatFrac g(ExpPoly::one(), ExpPoly::one() - e2(-4));
    CHECK_FALSE(frac_equal(f, g, EqualMode::CrossMul));
    CHECK_FALSE(frac_equal(f, g, EqualMode::Grid));
}

TEST_CASE("cross-mul and grid agree on random pairs") {
    std::mt19937 rng(20240811);
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        ExpPoly a = random_poly(rng), b = random_poly(rng), m = random_poly(rng);
        if (b.is_zero() || m.is_zero()) continue;
        RatFrac f(a, b);
        RatFrac g(a * m, b * m); // same value, different normal form
        CHECK(frac_equal(f, g, EqualMode::CrossMul));
        CHECK(frac_equal(f, g, EqualMode::Grid));
        ExpPoly c = random_poly(rng);
        RatFrac h(a + c, b);
        bool cm = frac_equal(f, h, EqualMode::CrossMul);
        bool gd = frac_equal(f, h, EqualMode::Grid);
        CHECK(cm == gd);
        ++checked;
    }
    CHECK(checked > 15);
}

TEST_CASE("ring axioms on random inputs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        ExpPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("linear substitution") {
    // e^{eps2} under eps2 -> eps2 - eps1
    CHECK(substitute_linear(e2(), shear_eps2_minus_eps1()) == e2() * e1(-4));
    // e^{a1} under a -> a + eps1 k with k = (1, -1)
    LinearMap shift = shift_a_by_eps(kEps1, {1, -1});
    CHECK(substitute_linear(ea(1), shift) == ea(1) * e1());
    CHECK(substitute_linear(ea(2), shift) == ea(2) * e1(-4));
    // e^{eps1+eps2} under eps2 -> -2 eps1
    CHECK(substitute_linear(e1() * e2(), specialize_eps2(Rat(-2))) == e1(-4));

    LinearMap bad = LinearMap::identity();
    bad.m[kEps1][kEps1] = Rat(1, 3);
    CHECK_THROWS_AS(substitute_linear(e1(), bad), LatticeOverflow);
}

TEST_CASE("substitution is a ring homomorphism") {
    std::mt19937 rng(99);
    LinearMap s = shear_eps2_minus_eps1();
    s.m[a_var(1)][kEps1] = 2;
    for (int trial = 0; trial < 30; ++trial) {
        ExpPoly a = random_poly(rng), b = random_poly(rng);
        CHECK(substitute_linear(a * b, s) == substitute_linear(a, s) * substitute_linear(b, s));
        CHECK(substitute_linear(a + b, s) == substitute_linear(a, s) + substitute_linear(b, s));
    }
}

TEST_CASE("canonical text form is stable") {
    ExpPoly p = e1(2) * Rat(3) + ea(1, -4) * Rat(1, 2);
    CHECK(p.str() == "1/2 * e[a1]^(-1) + 3 * e[eps1]^(1/2)");
    CHECK(ExpPoly::zero().str() == "0");
}

TEST_CASE("factored values match expanded fractions") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 25; ++trial) {
        ExpPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
        FracV x(a);
        x.mul_factor(b, -1);
        FracV y(c);
        y.mul_factor(b, -1);
        FracV s = x + y;
        RatFrac expect = RatFrac(a, b) + RatFrac(c, b);
        CHECK(frac_equal(s.to_rat_frac(), expect, EqualMode::CrossMul));
        FracV p = x * y;
        RatFrac expect_p = RatFrac(a, b) * RatFrac(c, b);
        CHECK(frac_equal(p.to_rat_frac(), expect_p, EqualMode::CrossMul));
        CHECK(equal_exact(x - x, FracV::zero()));
        if (!equal_exact(x, y)) CHECK_FALSE((x - y).is_zero());
    }
}

TEST_CASE("factored carrier matches formal-fraction semantics") {
    std::mt19937 rng(20260809);
    std::uniform_int_distribution<int> pw(-2, 2);
    int done = 0;
    for (int trial = 0; trial < 150 && done < 60; ++trial) {
        ExpPoly f1 = random_poly(rng), f2 = random_poly(rng);
        ExpPoly n1 = random_poly(rng), n2 = random_poly(rng);
        if (f1.is_zero() || f2.is_zero() || n1.is_zero() || n2.is_zero()) continue;
        int e1 = pw(rng), e2 = pw(rng), e3 = pw(rng);
        FracV a(n1), b(n2);
        a.mul_factor(f1, e1);
        a.mul_factor(f2, e2);
        b.mul_factor(f1, e3);
        b.mul_factor(f2, -e2);
        RatFrac ra = a.to_rat_frac(), rb = b.to_rat_frac();
        CHECK(frac_equal((a + b).to_rat_frac(), ra + rb));
        CHECK(frac_equal((a - b).to_rat_frac(), ra - rb));
        CHECK(frac_equal((a * b).to_rat_frac(), ra * rb));
        CHECK(frac_equal((a / b).to_rat_frac(), ra / rb));
        CHECK((a - a).is_zero());
        LinearMap s = shear_eps2_minus_eps1();
        CHECK(frac_equal(substitute_linear(a, s).to_rat_frac(),
                         substitute_linear(a.to_rat_frac(), s)));
        ++done;
    }
    CHECK(done >= 40);
}

TEST_CASE("eps expansion: geometric pole") {
    // 1/(1-e^{-eps1}) has a simple pole with unit residue and next term 1/2
    FracV f = FracV::one();
    f.mul_factor(ExpPoly::one() - e1(-4), -1);
    EpsSeries s = expand_eps_series(f, Rat(-2), 2);
    CHECK(s.lead == -1);
    CHECK(equal_exact(s.at(-1), FracV::one()));
    CHECK(equal_exact(s.at(0), FracV(Rat(1, 2))));
}

TEST_CASE("eps expansion: regular exponential") {
    // e^{a1 + eps1} = e^{a1} (1 + eps1 + ...)
    FracV f = FracV(ea(1) * e1());
    EpsSeries s = expand_eps_series(f, Rat(3), 1);
    CHECK(s.lead == 0);
    CHECK(equal_exact(s.at(0), FracV(ea(1))));
    CHECK(equal_exact(s.at(1), FracV(ea(1))));
}

TEST_CASE("eps expansion: degenerate direction is detected") {
    // (1 - e^{-(eps1+eps2)}) vanishes identically along eps2 = -eps1
    FracV f = FracV::one();
    f.mul_factor(ExpPoly::one() - (e1(-4) * e2(-4)), -1);
    CHECK_THROWS_AS(expand_eps_series(f, Rat(-1), 0), ConfigError);
    CHECK_THROWS_AS(expand_eps_series(f, Rat(0), 0), ConfigError);
}

TEST_CASE("residues of Laurent series over Q") {
    Laurent<Rat> f = Laurent<Rat>::from_coeffs(-1, {Rat(1), Rat(0), Rat(0)});
    CHECK(residue_hbar(f, Rat(0)) == Rat(1));
}

TEST_CASE("residue of (h - w)^j with nilpotent w") {
    for (int nil = 2; nil <= 6; ++nil) {
        TruncRingPtr ring = make_ring({nil});
        RElem w = RElem::generator(ring, 0);
        RElem one(ring, Rat(1));
        for (int j = -6; j <= 3; ++j) {
            Laurent<RElem> s = binom_h_minus(w, j, one, 4);
            RElem res = residue_hbar(s, RElem(ring));
            if (j == -1)
                CHECK(res == one);
            else
                CHECK(res.is_zero());
        }
    }
}

TEST_CASE("binomial residue in a projective ring") {
    // Res h^{-r} (h_gen + h)^{2r-2} at r = 2 is 2·h_gen
    TruncRingPtr ring = projective_ring(2);
    RElem h = RElem::generator(ring, 0);
    RElem one(ring, Rat(1));
    RElem zero(ring);
    // (h_gen + hbar)^2 = h_gen^2 + 2 h_gen hbar + hbar^2, times hbar^{-2}
    Laurent<RElem> f = Laurent<RElem>::from_coeffs(-2, {h * h, h * Rat(2), one, zero});
    RElem res = residue_hbar(f, RElem(ring));
    CHECK(res == h * Rat(2));
}

TEST_CASE("x transform of 1/(e^{-h}-1)") {
    int window = 10;
    Rat zero(0), one(1);
    // e^{-h} - 1 = -h + h^2/2 - ... as a series in h
    std::vector<Rat> c(static_cast<size_t>(window), zero);
    Rat sign(-1);
    for (int k = 1; k < window; ++k) {
        c[static_cast<size_t>(k)] = sign / Rat(factorial(k));
        sign = -sign;
    }
    Laurent<Rat> em1 = Laurent<Rat>::from_coeffs(0, c);
    Laurent<Rat> f = em1.inverse();
    CHECK(residue_hbar(f, zero) == Rat(-1));

    Laurent<Rat> fx = x_transform(f, one, window);
    // f as a function of x is exactly 1/x
    CHECK(fx.at(-1, zero) == Rat(1));
    CHECK(fx.at(0, zero) == Rat(0));
    CHECK(fx.at(1, zero) == Rat(0));

    // -Res_x fx/(1+x) must reproduce Res_h f
    std::vector<Rat> onepx(static_cast<size_t>(window), zero);
    onepx[0] = Rat(1);
    onepx[1] = Rat(1);
    Laurent<Rat> inv1px = Laurent<Rat>::from_coeffs(0, onepx).inverse();
    CHECK(-residue_hbar(fx * inv1px, zero) == Rat(-1));

    // a regular function has zero residue in both variables
    Laurent<Rat> reg = em1;
    CHECK(residue_hbar(reg, zero) == Rat(0));
    Laurent<Rat> regx = x_transform(reg, one, window);
    CHECK(-residue_hbar(regx * inv1px, zero) == Rat(0));
}
