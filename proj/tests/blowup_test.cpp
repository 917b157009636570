#include <catch2/catch_amalgamated.hpp>

#include "kinst/blowup.hpp"

using namespace kinst;

namespace {

ExpPoly e1(long q = 4) { return ExpPoly::exp_quarters(kEps1, q); }
ExpPoly e2(long q = 4) { return ExpPoly::exp_quarters(kEps2, q); }
ExpPoly ea(int alpha, long q = 4) { return ExpPoly::exp_quarters(a_var(alpha), q); }

} // namespace

TEST_CASE("H1 characters of O(mC)") {
    CHECK(h1_line_bundle_character(0).is_zero());
    CHECK(h1_line_bundle_character(1).is_zero());
    CHECK(h1_line_bundle_character(-1) == ExpPoly::one());
    CHECK(h1_line_bundle_character(2) == e1(-4) * e2(-4));
    CHECK(h1_line_bundle_character(3) ==
          e1(-8) * e2(-4) + e1(-4) * e2(-4) + e1(-4) * e2(-8));
    CHECK(h1_line_bundle_character(-2) == ExpPoly::one() + e1() + e2());
}

TEST_CASE("H1 closed forms match the chart procedure") {
    for (int m = -6; m <= 6; ++m) {
        INFO("m = " << m);
        ExpPoly proc = h1_line_bundle_character(m);
        CHECK(proc == h1_closed_form(m));
        // eps1 <-> eps2 symmetry
        CHECK(substitute_linear(proc, swap_eps()) == proc);
        long expected_rank = m >= 0 ? static_cast<long>(m) * (m - 1) / 2
                                    : static_cast<long>(-m) * (-m + 1) / 2;
        CHECK(character_rank(proc) == expected_rank);
    }
}

TEST_CASE("line bundle character record") {
    for (int m : {-4, -1, 0, 3}) {
        LineBundleChar lb = line_bundle_char(m);
        CHECK(lb.m == m);
        long expected_rank = m >= 0 ? static_cast<long>(m) * (m - 1) / 2
                                    : static_cast<long>(-m) * (-m + 1) / 2;
        CHECK(character_rank(lb.h1_char) == expected_rank);
    }
}

TEST_CASE("l-factor argument rank identity") {
    for (int r = 2; r <= 3; ++r) {
        std::vector<long> kv(static_cast<size_t>(r), 0);
        auto rec = [&](auto&& self, int slot) -> void {
            if (slot == r) {
                long sum = 0, norm = 0;
                for (long v : kv) sum += v, norm += v * v;
                ExpPoly arg = l_factor_argument(kv);
                CHECK(character_rank(arg) == r * norm - sum * sum);
                return;
            }
            for (long v = -3; v <= 3; ++v) {
                kv[static_cast<size_t>(slot)] = v;
                self(self, slot + 1);
            }
        };
        rec(rec, 0);
    }
}

TEST_CASE("l-factor values") {
    CHECK(frac_equal(blowup_l_factor({0, 0}), RatFrac::one()));
    // r=2, k=(1,0): the only contribution is h1(-1) = 1 against e^{a1-a2},
    // giving the single Euler factor 1 - e^{a2-a1}
    RatFrac lf = blowup_l_factor({1, 0});
    CHECK(frac_equal(lf, RatFrac::of(ExpPoly::one() - ea(2) * ea(1, -4))));
    CHECK(character_rank(l_factor_argument({1, 0})) == 1);
    CHECK(character_rank(l_factor_argument({1, -1})) == 4);
}

TEST_CASE("patch substitution") {
    InsertionSpec spec;
    LamSeries z = z_inst(1, spec, 2, 0);
    std::vector<long> k0{0};
    LamSeries p1 = patch_substitution(z, 1, k0, 1, 0, 0);
    CHECK(equal_exact(p1.plain(0), FracV::one()));
    // Lambda^2 coefficient gains e^{-eps1/2} and the eps2 -> eps2 - eps1 shear
    FracV expect =
        substitute_linear(z.plain(2), shear_eps2_minus_eps1()) * FracV(e1(-2));
    CHECK(equal_exact(p1.plain(2), expect));
}

TEST_CASE("patch substitution mixes tau into t") {
    InsertionSpec spec;
    spec.tau_orders = {1};
    LamSeries z = z_inst(1, spec, 0, 1);
    std::vector<long> k0{0};
    LamSeries p2 = patch_substitution(z, 2, k0, 1, 0, 0);
    FracV base = z.coeff(0, InsMono::var(InsVar{false, 1}));
    // base is eps2-free here, so the shear does not alter it
    FracV tau_part = p2.coeff(0, InsMono::var(InsVar{false, 1}));
    FracV t_part = p2.coeff(0, InsMono::var(InsVar{true, 1}));
    FracV shear_base = substitute_linear(base, shear_eps1_minus_eps2());
    CHECK(equal_exact(tau_part, shear_base * FracV(e2(-2))));
    CHECK(equal_exact(t_part, shear_base * FracV(e2(2) - e2(-2))));
}

TEST_CASE("degree-2 insertion grading through the patch substitution") {
    InsertionSpec spec;
    spec.tau_orders = {1};
    LamSeries z = z_inst(1, spec, 0, 2);
    FracV lin = z.coeff(0, InsMono::var(InsVar{false, 1}));
    InsMono tau_sq = InsMono::var(InsVar{false, 1}) * InsMono::var(InsVar{false, 1});
    // exp[tau_1 f] contributes f^2/2 at the tau_1^2 grade
    CHECK(equal_exact(z.coeff(0, tau_sq), lin * lin * rat(1, 2)));

    std::vector<long> k0{0};
    LamSeries p2 = patch_substitution(z, 2, k0, 1, 0, 0);
    FracV sheared = substitute_linear(lin, shear_eps1_minus_eps2());
    FracV u = FracV(e2(-2));            // e^{-eps2/2}
    FracV w = FracV(e2(2) - e2(-2));    // e^{-eps2/2}(e^{eps2}-1)
    InsMono t_sq = InsMono::var(InsVar{true, 1}) * InsMono::var(InsVar{true, 1});
    InsMono mixed = InsMono::var(InsVar{false, 1}) * InsMono::var(InsVar{true, 1});
    FracV half_sq = sheared * sheared * rat(1, 2);
    CHECK(equal_exact(p2.coeff(0, t_sq), half_sq * w * w));
    CHECK(equal_exact(p2.coeff(0, mixed), half_sq * u * w * Rat(2)));
    CHECK(equal_exact(p2.coeff(0, tau_sq), half_sq * u * u));
}

TEST_CASE("a-shift by the k vector") {
    InsertionSpec spec;
    LamSeries z = z_inst(2, spec, 4, 0);
    std::vector<long> kv{1, -1};
    LamSeries p1 = patch_substitution(z, 1, kv, 2, 0, 0);
    FracV expect = substitute_linear(
        substitute_linear(z.plain(4), shear_eps2_minus_eps1()), shift_a_by_eps(kEps1, kv));
    expect = expect * FracV(e1(-4)); // n=1, delta = -1: e^{-eps1}
    CHECK(equal_exact(p1.plain(4), expect));
}

TEST_CASE("k-vector enumeration") {
    auto ks = enumerate_kvecs(2, 0, 8);
    REQUIRE(ks.size() >= 3);
    CHECK(ks[0] == std::vector<long>{0, 0});
    // ordered by (k,k): the two norm-2 vectors follow
    CHECK(ks[1] == std::vector<long>{-1, 1});
    CHECK(ks[2] == std::vector<long>{1, -1});
    for (const auto& kv : ks) {
        long s = 0, norm = 0;
        for (long v : kv) s += v, norm += v * v;
        CHECK(s == 0);
        CHECK(2 * norm <= 8);
    }
}

TEST_CASE("blow-up series leading term") {
    InsertionSpec spec;
    LamSeries zh = zhat_inst(2, 0, 0, 1, 4, spec, 0);
    CHECK(equal_exact(zh.plain(0), FracV::one()));
}

TEST_CASE("rank-1 blow-up identity") {
    // no l-factors in rank 1: a pure cross-check of the patch substitutions
    InsertionSpec spec;
    LamSeries z = z_inst(1, spec, 6, 0);
    for (int d = 0; d <= 1; ++d) {
        LamSeries zh = zhat_inst(1, 0, 0, d, 6, spec, 0);
        for (int n = 0; n <= 6; ++n) {
            INFO("d=" << d << " Lambda^" << n);
            CHECK(equal_exact(zh.plain(n), z.plain(n)));
        }
    }
}
