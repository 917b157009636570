// Acceptance suite: one line per criterion, exact checks only.
// Exit status is the number of failed criteria.

#include <chrono>
#include <iostream>
#include <string>

#include "kinst/cache.hpp"
#include "kinst/identities.hpp"
#include "kinst/wallcross.hpp"

using namespace kinst;

namespace {

int failures = 0;

struct Criterion {
    std::string label;
    std::chrono::steady_clock::time_point start;
    explicit Criterion(std::string l) : label(std::move(l)), start(std::chrono::steady_clock::now()) {}
    void report(bool ok, const std::string& detail = "") {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << label;
        if (!detail.empty()) std::cout << " -- " << detail;
        std::cout << "  (" << secs << "s)\n" << std::flush;
        if (!ok) ++failures;
    }
};

ExpPoly ea(int alpha, long q = 4) { return ExpPoly::exp_quarters(a_var(alpha), q); }

} // namespace

// 1. armleg tangent character equals the ADHM oracle, |Y| <= 5, r <= 3
static void criterion_1() {
    Criterion c("1 tangent oracle equivalence (|Y| <= 5, r <= 3, term count 2r|Y|)");
    bool ok = true;
    for (int r = 1; r <= 3 && ok; ++r) {
        for (int n = 0; n <= 5 && ok; ++n) {
            for (const auto& Y : enumerate_tuples(r, n)) {
                ExpPoly oracle = tangent_character_adhm(Y);
                if (!(oracle == tangent_character_armleg(Y)) ||
                    character_rank(oracle) != 2 * r * n) {
                    ok = false;
                    break;
                }
            }
        }
    }
    c.report(ok);
}

// 2. rank-1 blow-up identity through Lambda^6
static void criterion_2() {
    Criterion c("2 rank-1 blow-up identity through Lambda^6");
    CheckReport rep = check_blowup_eq(1, 0, 0, 6);
    c.report(rep.all_hold());
}

// 3. blow-up equation, r=2, l,d in {0,1,2}, through Lambda^8
static void criterion_3() {
    bool ok = true;
    std::string detail;
    Criterion c("3 blow-up equation r=2, l,d in {0,1,2}, through Lambda^8");
    for (long l = 0; l <= 2; ++l) {
        for (int d = 0; d <= 2; ++d) {
            CheckReport rep = check_blowup_eq(2, l, d, 8);
            if (!rep.all_hold()) {
                ok = false;
                detail = "fails at l=" + std::to_string(l) + " d=" + std::to_string(d);
            }
        }
    }
    c.report(ok, detail);
}

// 4. line-bundle character invariants
static void criterion_4() {
    Criterion c("4 l-factor rank identity (|k|<=3, r<=3) and H1 closed forms (|m|<=6)");
    bool ok = true;
    for (int m = -6; m <= 6 && ok; ++m) {
        ExpPoly proc = h1_line_bundle_character(m);
        if (!(proc == h1_closed_form(m))) ok = false;
        if (!(substitute_linear(proc, swap_eps()) == proc)) ok = false;
    }
    for (int r = 2; r <= 3 && ok; ++r) {
        std::vector<long> kv(static_cast<size_t>(r), 0);
        auto rec = [&](auto&& self, int slot) -> void {
            if (!ok) return;
            if (slot == r) {
                long sum = 0, norm = 0;
                for (long v : kv) sum += v, norm += v * v;
                if (character_rank(l_factor_argument(kv)) != r * norm - sum * sum) ok = false;
                return;
            }
            for (long v = -3; v <= 3; ++v) {
                kv[static_cast<size_t>(slot)] = v;
                self(self, slot + 1);
            }
        };
        rec(rec, 0);
    }
    c.report(ok);
}

// 5. t_p vanishing through Lambda^8
static void criterion_5() {
    Criterion c("5 t_p-grade vanishing r=2 l=0, (p,d) in {(1,0),(1,1),(-1,1),(-1,2),(2,0)}, Lambda^8");
    bool ok = true;
    std::string detail;
    const std::pair<int, int> cases[] = {{1, 0}, {1, 1}, {-1, 1}, {-1, 2}, {2, 0}};
    for (auto [p, d] : cases) {
        CheckReport rep = check_vanish_t(2, 0, d, p, 8);
        if (!rep.all_hold()) {
            ok = false;
            detail = "fails at p=" + std::to_string(p) + " d=" + std::to_string(d);
        }
    }
    c.report(ok, detail);
}

// 6. k != 0 vanishing: the criterion asserts exactly one sign vanishes
static void criterion_6() {
    Criterion c("6 k-sector vanishing r=2 l=0 d=1: exactly one of k=+1/-1 zero through Lambda^8");
    InsertionSpec spec;
    LamSeries plus = zhat_inst(2, 0, 1, 1, 8, spec, 0);
    LamSeries minus = zhat_inst(2, 0, -1, 1, 8, spec, 0);
    bool plus_zero = true, minus_zero = true;
    for (int n = 0; n <= 8; ++n) {
        if (!plus.plain(n).is_zero()) plus_zero = false;
        if (!minus.plain(n).is_zero()) minus_zero = false;
    }
    bool exactly_one = plus_zero != minus_zero;
    std::string detail;
    if (plus_zero && minus_zero)
        detail =
            "both signs vanish: at l=0 sheaf duality (a -> -a, k -> -k, d fixed) mirrors the "
            "two signs, so the one-sidedness asserted here cannot hold; see the vanish-k "
            "report and the l=1 criterion below for the sign-resolved statement";
    c.report(exactly_one, detail);

    // the sign-resolved form of the same vanishing, where the mirror is broken
    Criterion c2("6b k-sector vanishing r=2 l=1 d=1: exactly one sign, frozen as k=+1");
    CheckReport rep = check_vanish_k(2, 1, 1, 1, 8);
    c2.report(rep.all_hold() && rep.note == "vanishing sign: k=+1", rep.note);
}

// 7. specialization symmetry through Lambda^8
static void criterion_7() {
    Criterion c("7 symmetry Z(eps1,-2eps1) = Z(2eps1,-eps1) for (r,l) in {(1,0),(2,0),(2,1)}, Lambda^8");
    bool ok = check_sym(1, 0, 8).all_hold() && check_sym(2, 0, 8).all_hold() &&
              check_sym(2, 1, 8).all_hold();
    c.report(ok);
}

// 8. recursion solver
static void criterion_8() {
    Criterion c("8 recursion solver r=2 l=0, pair (0,1) reproduces Lambda^4, Lambda^8; invariant for (0,2)");
    SolveResult a = solve_recursive(2, 0, 0, 1, 8);
    SolveResult b = solve_recursive(2, 0, 0, 2, 8);
    bool ok = a.matches_direct && b.matches_direct;
    for (int n : {4, 8})
        if (!equal_exact(a.recovered.plain(n), b.recovered.plain(n))) ok = false;
    c.report(ok);
}

// 9. regularity of the tau-derivative limits
static void criterion_9() {
    Criterion c("9 eps1 eps2 dlogZ/dtau_p pole-free and direction-independent at Lambda^4, r=2, p=+-1");
    bool ok = true;
    std::string detail;
    try {
        for (int p : {1, -1}) f0_tau_derivative(2, 0, p, 4, {Rat(-2), rat(-1, 2), Rat(3)});
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    c.report(ok, detail);
}

// 10. constant term of dF0/dtau_p
static void criterion_10() {
    Criterion c("10 dF0/dtau_p at Lambda^0 equals sum_alpha e^{p a_alpha}, r <= 3, |p| <= 2");
    bool ok = true;
    for (int r = 1; r <= 3 && ok; ++r) {
        for (int p : {1, -1, 2, -2}) {
            LimitSeries f0 = f0_tau_derivative(r, 0, p, 0);
            ExpPoly expect;
            for (int alpha = 1; alpha <= r; ++alpha) expect = expect + ea(alpha, 4 * p);
            if (f0.values.size() != 1 || !equal_exact(f0.values[0].second, FracV(expect))) {
                ok = false;
                break;
            }
        }
    }
    c.report(ok);
}

// 11. Seiberg-Witten coefficients
static void criterion_11() {
    Criterion c("11 U_p at Lambda^0 is (-1)^p e_p(e^a); Newton cross-check at Lambda^4 (r=2, l=0, p=1)");
    bool ok = true;
    // Lambda^0 values for r=2,3 and admissible p (0 < p <= (r-l)/2)
    struct Case {
        int r;
        long l;
        int p;
    };
    const Case cases[] = {{2, 0, 1}, {3, 0, 1}, {3, 1, 1}};
    for (const auto& cs : cases) {
        LimitSeries u = extract_up(cs.r, cs.l, cs.p, 0);
        ExpPoly e1;
        for (int alpha = 1; alpha <= cs.r; ++alpha) e1 = e1 + ea(alpha);
        if (u.values.empty() || !equal_exact(u.values[0].second, -FracV(e1))) ok = false;
    }
    // Newton: e_1 = p_1 links the two independent pipelines order by order
    LimitSeries u = extract_up(2, 0, 1, 4);
    LimitSeries f = f0_tau_derivative(2, 0, 1, 4);
    if (u.values.size() != f.values.size()) {
        ok = false;
    } else {
        for (size_t i = 0; i < u.values.size(); ++i)
            if (u.values[i].first != f.values[i].first ||
                !equal_exact(u.values[i].second, -f.values[i].second))
                ok = false;
    }
    c.report(ok);
}

// 12. first-instanton wall-crossing coefficients
static void criterion_12() {
    Criterion c("12 wall-crossing example: -2 at (r,Nf)=(2,0) and -C(2r-Nf-2, r-1) for r <= 4");
    bool ok = example_blowup_coeff(2, 0) == Rat(-2);
    for (int r = 1; r <= 4 && ok; ++r)
        for (int nf = 0; nf <= 2 * r - 1 && ok; ++nf)
            if (example_blowup_coeff(r, nf) != -binom_gen(2 * r - nf - 2, r - 1)) ok = false;
    c.report(ok);
}

// 13. determinism of the criterion-3 machine output across thread counts
static void criterion_13() {
    Criterion c("13 criterion-3 machine output byte-identical for 1 and 4 threads");
    bool ok = true;
    InsertionSpec spec;
    for (long l = 0; l <= 2 && ok; ++l) {
        for (int d = 0; d <= 2 && ok; ++d) {
            spec.cs_level = l;
            thread_count() = 1;
            std::string one = serialize_series(zhat_inst(2, l, 0, d, 8, spec, 0));
            thread_count() = 4;
            std::string four = serialize_series(zhat_inst(2, l, 0, d, 8, spec, 0));
            thread_count() = 1;
            if (one != four) ok = false;
        }
    }
    c.report(ok);
}

int main() {
    std::cout << "acceptance suite: exact identity checks at desk scale\n";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    if (failures) std::cout << failures << " criterion(s) failed\n";
    else std::cout << "all criteria passed\n";
    return failures;
}
