#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kinst/lam_series.hpp"
#include "kinst/parallel.hpp"
#include "kinst/partitions.hpp"

namespace kinst {

// Character of the fiber of V(E) at the fixed point:
//   sum_alpha e^{a_alpha} sum_{s in Y_alpha} e^{-l'(s) eps1 - a'(s) eps2}
inline ExpPoly v_character(const YoungTuple& Y) {
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    for (int alpha = 1; alpha <= Y.rank(); ++alpha) {
        const auto& d = Y.diagrams[static_cast<size_t>(alpha - 1)];
        for (auto [i, j] : d.cells()) {
            ExpKey k;
            k.set(a_var(alpha), 4);
            k.set(kEps1, -4 * (i - 1)); // l'(s) = i - 1
            k.set(kEps2, -4 * (j - 1)); // a'(s) = j - 1
            acc[k] += 1;
        }
    }
    return ExpPoly::from_map(acc);
}

inline void check_rank_bound(int r) {
    if (r < 1 || a_var(r) >= ExpKey::kMaxVars)
        throw ConfigError("rank must be between 1 and " +
                          std::to_string(ExpKey::kMaxVars - 2));
}

inline ExpPoly framing_character(int r) {
    check_rank_bound(r);
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    for (int alpha = 1; alpha <= r; ++alpha) {
        ExpKey k;
        k.set(a_var(alpha), 4);
        acc[k] += 1;
    }
    return ExpPoly::from_map(acc);
}

namespace detail {

// per-diagram cell character sum_{s} e^{-l'(s) eps1 - a'(s) eps2}
inline ExpPoly cell_character(const YoungDiagram& d) {
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    for (auto [i, j] : d.cells()) {
        ExpKey k;
        k.set(kEps1, -4 * (i - 1));
        k.set(kEps2, -4 * (j - 1));
        acc[k] += 1;
    }
    return ExpPoly::from_map(acc);
}

inline void check_integer_multiplicities(const ExpPoly& t) {
    for (const auto& [k, c] : t.terms())
        if (c.get_den() != 1)
            throw CancellationFailure("tangent character with non-integer multiplicity: " +
                                      t.str());
}

} // namespace detail

// The (alpha, beta) block of the tangent character from the ADHM complex,
//   e^{a_beta - a_alpha} [ V_beta + e^{eps1+eps2} V_alpha^v
//                          - (1-e^{eps1})(1-e^{eps2}) V_alpha^v V_beta ],
// summed over blocks this is
//   W^v V + e^{eps1+eps2} V^v W - (1-e^{eps1})(1-e^{eps2}) V^v V.
// This is the oracle for the localization denominators n^Y_{alpha,beta}.
inline ExpPoly tangent_block_adhm(const YoungTuple& Y, int alpha, int beta) {
    const auto& da = Y.diagrams[static_cast<size_t>(alpha - 1)];
    const auto& db = Y.diagrams[static_cast<size_t>(beta - 1)];
    ExpPoly va = detail::cell_character(da);
    ExpPoly vb = detail::cell_character(db);
    ExpPoly va_dual = va.negate_exponents();

    ExpPoly eps_shift = ExpPoly::exp_quarters(kEps1, 4) * ExpPoly::exp_quarters(kEps2, 4);
    ExpPoly koszul = (ExpPoly::one() - ExpPoly::exp_quarters(kEps1, 4)) *
                     (ExpPoly::one() - ExpPoly::exp_quarters(kEps2, 4));

    ExpPoly block = vb + eps_shift * va_dual - koszul * (va_dual * vb);
    ExpKey ab;
    ab.add(a_var(beta), 4);
    ab.add(a_var(alpha), -4);
    ExpPoly out = block.times_monomial(ab, Rat(1));
    detail::check_integer_multiplicities(out);
    return out;
}

inline ExpPoly tangent_character_adhm(const YoungTuple& Y) {
    ExpPoly t;
    for (int alpha = 1; alpha <= Y.rank(); ++alpha)
        for (int beta = 1; beta <= Y.rank(); ++beta) t = t + tangent_block_adhm(Y, alpha, beta);
    detail::check_integer_multiplicities(t);
    return t;
}

// Arm/leg closed form of the same block:
//   e^{a_beta - a_alpha} [ sum_{s in Y_alpha} e^{-l_{Y_beta}(s) eps1 + (a_{Y_alpha}(s)+1) eps2}
//                        + sum_{t in Y_beta}  e^{(l_{Y_alpha}(t)+1) eps1 - a_{Y_beta}(t) eps2} ]
inline ExpPoly tangent_block_armleg(const YoungTuple& Y, int alpha, int beta) {
    const auto& da = Y.diagrams[static_cast<size_t>(alpha - 1)];
    const auto& db = Y.diagrams[static_cast<size_t>(beta - 1)];
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    ExpKey ab;
    ab.add(a_var(beta), 4);
    ab.add(a_var(alpha), -4);
    for (auto [i, j] : da.cells()) {
        ExpKey k = ab;
        k.add(kEps1, -4 * leg_in(db, i, j));
        k.add(kEps2, 4 * (arm_in(da, i, j) + 1));
        acc[k] += 1;
    }
    for (auto [i, j] : db.cells()) {
        ExpKey k = ab;
        k.add(kEps1, 4 * (leg_in(da, i, j) + 1));
        k.add(kEps2, -4 * arm_in(db, i, j));
        acc[k] += 1;
    }
    return ExpPoly::from_map(acc);
}

inline ExpPoly tangent_character_armleg(const YoungTuple& Y) {
    ExpPoly t;
    for (int alpha = 1; alpha <= Y.rank(); ++alpha)
        for (int beta = 1; beta <= Y.rank(); ++beta) t = t + tangent_block_armleg(Y, alpha, beta);
    return t;
}

inline long character_rank(const ExpPoly& t) {
    Rat total(0);
    for (const auto& [k, c] : t.terms()) total += c;
    if (total.get_den() != 1 || !total.get_num().fits_slong_p())
        throw CancellationFailure("character rank is not an integer");
    return total.get_num().get_si();
}

// K-theoretic Euler class of a character with integer multiplicities:
// product over weights of (1 - e^{-w}), negative multiplicities in the
// denominator.  Factored form.
inline FracV ek_euler_fv(const ExpPoly& character) {
    FracV out = FracV::one();
    for (const auto& [k, c] : character.terms()) {
        if (k.is_zero()) throw ZeroWeight();
        if (c.get_den() != 1 || !c.get_num().fits_slong_p())
            throw CancellationFailure("Euler class of a non-integral character");
        long mult = c.get_num().get_si();
        ExpPoly factor = ExpPoly::one() - ExpPoly::monomial(-k);
        out.mul_factor(factor, static_cast<int>(mult));
    }
    return out;
}

inline RatFrac ek_euler(const ExpPoly& character) { return ek_euler_fv(character).to_rat_frac(); }

// Chern-Simons weight exp[ l sum_alpha sum_{s in Y_alpha}
//   (a_alpha - l'(s) eps1 - a'(s) eps2 - (eps1+eps2)/2) ], one monomial.
inline ExpPoly cs_factor(const YoungTuple& Y, long l) {
    ExpKey bracket;
    for (int alpha = 1; alpha <= Y.rank(); ++alpha) {
        const auto& d = Y.diagrams[static_cast<size_t>(alpha - 1)];
        for (auto [i, j] : d.cells()) {
            bracket.add(a_var(alpha), 4);
            bracket.add(kEps1, -4 * (i - 1) - 2);
            bracket.add(kEps2, -4 * (j - 1) - 2);
        }
    }
    return ExpPoly::monomial(bracket.scaled(l));
}

namespace detail {

inline ExpPoly sinh_like(int var) { // e^{x/2} - e^{-x/2}
    return ExpPoly::exp_quarters(var, 2) - ExpPoly::exp_quarters(var, -2);
}

} // namespace detail

// Coefficient of tau_p in the Casimir insertion exponent:
//   sum_alpha e^{p a_alpha} {1 - (1-e^{-p eps1})(1-e^{-p eps2}) sum_s e^{-p l' eps1 - p a' eps2}}
//   / ((e^{eps1/2}-e^{-eps1/2})(e^{eps2/2}-e^{-eps2/2}))
inline FracV tau_factor_fv(const YoungTuple& Y, int p) {
    if (p == 0) throw RangeViolation("Adams index p must be nonzero");
    ExpPoly koszul_p = (ExpPoly::one() - ExpPoly::exp_quarters(kEps1, -4 * p)) *
                       (ExpPoly::one() - ExpPoly::exp_quarters(kEps2, -4 * p));
    ExpPoly num;
    for (int alpha = 1; alpha <= Y.rank(); ++alpha) {
        const auto& d = Y.diagrams[static_cast<size_t>(alpha - 1)];
        ExpPoly cells = detail::cell_character(d).scale_exponents(p);
        ExpPoly braced = ExpPoly::one() - koszul_p * cells;
        ExpKey pa;
        pa.set(a_var(alpha), 4 * p);
        num = num + braced.times_monomial(pa, Rat(1));
    }
    FracV out(num);
    out.mul_factor(detail::sinh_like(kEps1), -1);
    out.mul_factor(detail::sinh_like(kEps2), -1);
    return out;
}

inline RatFrac tau_factor(const YoungTuple& Y, int p) { return tau_factor_fv(Y, p).to_rat_frac(); }

// Virtual character of the universal sheaf restricted to the origin:
//   ch(E)|_0 = W - (1-e^{-eps1})(1-e^{-eps2}) V.
inline ExpPoly origin_class(const YoungTuple& Y) {
    ExpPoly koszul = (ExpPoly::one() - ExpPoly::exp_quarters(kEps1, -4)) *
                     (ExpPoly::one() - ExpPoly::exp_quarters(kEps2, -4));
    return framing_character(Y.rank()) - koszul * v_character(Y);
}

inline ExpPoly adams(const ExpPoly& cls, long p) { return cls.scale_exponents(p); }

// Wedge powers of a (virtual) character via Newton's identities from the
// Adams power sums:  p e_p = sum_{k=1..p} (-1)^{k-1} e_{p-k} psi^k.
inline ExpPoly wedge(const ExpPoly& cls, int p) {
    if (p < 0) throw RangeViolation("wedge power must be nonnegative");
    std::vector<ExpPoly> e(static_cast<size_t>(p) + 1);
    e[0] = ExpPoly::one();
    for (int m = 1; m <= p; ++m) {
        ExpPoly acc;
        Rat sign(1);
        for (int k = 1; k <= m; ++k) {
            acc = acc + (e[static_cast<size_t>(m - k)] * adams(cls, k)) * sign;
            sign = -sign;
        }
        e[static_cast<size_t>(m)] = acc * Rat(1, m);
    }
    return e[static_cast<size_t>(p)];
}

enum class AdamsWedgeMode { Adams, Wedge };

inline ExpPoly adams_wedge(const ExpPoly& cls, int p, AdamsWedgeMode mode) {
    return mode == AdamsWedgeMode::Adams ? adams(cls, p) : wedge(cls, p);
}

// Everything inserted into the fixed-point sum besides the bare weight.
struct InsertionSpec {
    long cs_level = 0;
    std::vector<int> tau_orders; // Adams indices activated at linear order
    std::function<ExpPoly(const YoungTuple&)> extra_class; // optional per-point factor
};

struct FixedPointData {
    YoungTuple index;
    ExpPoly v_char;
    ExpPoly t_char;
    RatFrac weight;
};

inline FixedPointData fixed_point_data(const YoungTuple& Y) {
    FixedPointData d;
    d.index = Y;
    d.v_char = v_character(Y);
    d.t_char = tangent_character_armleg(Y);
    FracV w = ek_euler_fv(d.t_char).inverse();
    d.weight = w.to_rat_frac();
    return d;
}

// K-theoretic Nekrasov partition function on the plane:
//   Z^inst_l = sum_Y (Lambda^{2r} e^{-r(eps1+eps2)/2})^{|Y|} cs_factor
//              exp[sum_p tau_p tau_factor_p] / prod n^Y,
// with the tau-exponential truncated at the series' insertion degree.
inline LamSeries z_inst(int r, const InsertionSpec& spec, int lambda_cap, int ins_cap = 1) {
    check_rank_bound(r);
    LamSeries out(lambda_cap, ins_cap);
    for (int n = 0; 2 * r * n <= lambda_cap; ++n) {
        auto tuples = enumerate_tuples(r, n);
        auto chunks = parallel_map<std::vector<std::pair<InsMono, FracV>>>(
            tuples.size(), [&](size_t idx) {
                const YoungTuple& Y = tuples[idx];
                std::vector<std::pair<InsMono, FracV>> contrib;
                ExpKey pref;
                pref.set(kEps1, -2 * r * n);
                pref.set(kEps2, -2 * r * n);
                FracV base = FracV::monomial(pref) *
                             FracV(cs_factor(Y, spec.cs_level)) *
                             ek_euler_fv(tangent_character_armleg(Y)).inverse();
                if (spec.extra_class) base = base * FracV(spec.extra_class(Y));
                contrib.emplace_back(InsMono::unit(), base);
                if (ins_cap >= 1) {
                    std::vector<std::pair<InsVar, FracV>> linear;
                    for (int p : spec.tau_orders)
                        linear.emplace_back(InsVar{false, p}, tau_factor_fv(Y, p));
                    for (const auto& [v1, f1] : linear) {
                        contrib.emplace_back(InsMono::var(v1), base * f1);
                        if (ins_cap >= 2) {
                            for (const auto& [v2, f2] : linear) {
                                if (v2 < v1) continue;
                                InsMono g = InsMono::var(v1) * InsMono::var(v2);
                                Rat half = (v1 == v2) ? Rat(1, 2) : Rat(1);
                                contrib.emplace_back(g, base * f1 * f2 * half);
                            }
                        }
                    }
                }
                return contrib;
            });
        for (const auto& chunk : chunks)
            for (const auto& [g, v] : chunk) out.accumulate(2 * r * n, g, v);
    }
    return out;
}

} // namespace kinst
