#pragma once

#include <algorithm>
#include <vector>

#include "kinst/instanton.hpp"

namespace kinst {

// H^1 character of O(mC) on the blown-up plane, by the two-chart procedure.
// Chart 1 has coordinates (s, t) of weights (eps1, eps2-eps1); for m > 0 the
// Cech H^1 basis is { s^a t^b s^{-m} : a >= 0, b <= -1, a - b <= m - 1 }.
// For m < 0 the character accumulates through the twist exact sequences: at
// the step m+1 -> m the O_C piece O_C(-(m+1)) contributes sections with
// fiber weight -(m+1) eps1 spread along the exceptional curve by t-weights.
inline ExpPoly h1_line_bundle_character(int m) {
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    if (m > 0) {
        for (int a = 0; a <= m - 1; ++a) {
            for (int b = -1; a - b <= m - 1; --b) {
                // weight of s^a t^b s^{-m}: (a-m) eps1 + b (eps2-eps1)
                ExpKey k;
                k.set(kEps1, 4 * (a - m - b));
                k.set(kEps2, 4 * b);
                acc[k] += 1;
            }
        }
    } else if (m < 0) {
        for (int step = -1; step >= m; --step) {
            // sections of O_C(-(step+1)); dimension -step
            for (int j = 0; j <= -step - 1; ++j) {
                ExpKey k;
                k.set(kEps1, 4 * (-(step + 1) + j * (-1)));
                k.set(kEps2, 4 * j);
                // weight: -(step+1) eps1 + j (eps2 - eps1)
                acc[k] += 1;
            }
        }
    }
    return ExpPoly::from_map(acc);
}

// Closed forms the procedure is tested against:
//   m > 0:  sum_{i,j >= 1, i+j <= m}   e^{-i eps1 - j eps2}
//   m < 0:  sum_{i,j >= 0, i+j <= -m-1} e^{ i eps1 + j eps2}
inline ExpPoly h1_closed_form(int m) {
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    if (m > 0) {
        for (int i = 1; i + 1 <= m; ++i)
            for (int j = 1; i + j <= m; ++j) {
                ExpKey k;
                k.set(kEps1, -4 * i);
                k.set(kEps2, -4 * j);
                acc[k] += 1;
            }
    } else if (m < 0) {
        for (int i = 0; i <= -m - 1; ++i)
            for (int j = 0; i + j <= -m - 1; ++j) {
                ExpKey k;
                k.set(kEps1, 4 * i);
                k.set(kEps2, 4 * j);
                acc[k] += 1;
            }
    }
    return ExpPoly::from_map(acc);
}

struct LineBundleChar {
    int m = 0;
    ExpPoly h1_char;
};

inline LineBundleChar line_bundle_char(int m) { return {m, h1_line_bundle_character(m)}; }

// Character whose K-theoretic Euler class is the l^k localization factor:
//   sum_{alpha != beta} e^{a_beta - a_alpha} · h1(k_alpha - k_beta).
// The pairing orientation is the one the two-chart H^1 conventions force;
// it is pinned end to end by the blow-up identity tests.
inline ExpPoly l_factor_argument(const std::vector<long>& kvec) {
    int r = static_cast<int>(kvec.size());
    ExpPoly arg;
    for (int alpha = 1; alpha <= r; ++alpha) {
        for (int beta = 1; beta <= r; ++beta) {
            if (alpha == beta) continue;
            ExpPoly h1 = h1_line_bundle_character(
                static_cast<int>(kvec[static_cast<size_t>(alpha - 1)] -
                                 kvec[static_cast<size_t>(beta - 1)]));
            if (h1.is_zero()) continue;
            ExpKey ab;
            ab.set(a_var(beta), 4);
            ab.set(a_var(alpha), -4);
            arg = arg + h1.times_monomial(ab, Rat(1));
        }
    }
    return arg;
}

inline FracV blowup_l_factor_fv(const std::vector<long>& kvec) {
    ExpPoly arg = l_factor_argument(kvec);
    if (arg.is_zero()) return FracV::one();
    return ek_euler_fv(arg);
}

inline RatFrac blowup_l_factor(const std::vector<long>& kvec) {
    return blowup_l_factor_fv(kvec).to_rat_frac();
}

enum class TauConvention { Scalar, AdamsScaled };

// Argument substitutions of one blow-up patch applied to a plane series:
// patch 1 sends (eps1, eps2) -> (eps1, eps2 - eps1), patch 2 the mirror;
// a -> a + eps_patch k; Lambda^n picks up e^{n (d-(r+l)/2) eps_patch};
// tau_p -> e^{-eps_patch/2} (tau_p + (e^{eps_patch} - 1) t_p).
inline LamSeries patch_substitution(const LamSeries& series, int patch,
                                    const std::vector<long>& kvec, int r, int d, long l,
                                    TauConvention conv = TauConvention::Scalar) {
    if (patch != 1 && patch != 2) throw ConfigError("patch must be 1 or 2");
    int eps = patch == 1 ? kEps1 : kEps2;
    LinearMap shear = patch == 1 ? shear_eps2_minus_eps1() : shear_eps1_minus_eps2();

    // compose: first the eps shear, then the a-shift
    LamSeries out(series.lambda_cap, series.ins_cap);
    int delta_quarters = 2 * (2 * d - r - static_cast<int>(l)); // 4 * (d - (r+l)/2)
    for (const auto& [n, grades] : series.c) {
        if (n % (2 * r) != 0) throw LatticeOverflow("plane series with unexpected Lambda grading");
        ExpKey lam_shift;
        lam_shift.set(eps, (n / (2 * r)) * delta_quarters);
        for (const auto& [g, v] : grades) {
            FracV w = substitute_linear(v, shear) * FracV::monomial(lam_shift);
            if (g.degree() == 0) {
                out.accumulate(n, g, w);
                continue;
            }
            // substitute each tau factor of the grade monomial
            std::vector<std::pair<InsMono, FracV>> images{{InsMono::unit(), w}};
            for (const auto& [var, power] : g.factors) {
                if (var.is_t) throw ConfigError("patch substitution applied to a t-graded series");
                int scale = conv == TauConvention::AdamsScaled ? var.p : 1;
                FracV tau_u = FracV::monomial([&] {
                    ExpKey k;
                    k.set(eps, -2 * scale);
                    return k;
                }());
                // e^{-eps/2} (e^{eps} - 1) = e^{eps/2} - e^{-eps/2}
                FracV t_u = FracV(ExpPoly::exp_quarters(eps, 2 * scale) -
                                  ExpPoly::exp_quarters(eps, -2 * scale));
                for (int rep = 0; rep < power; ++rep) {
                    std::vector<std::pair<InsMono, FracV>> next;
                    for (const auto& [mono, coeff] : images) {
                        InsMono mt = mono * InsMono::var(InsVar{false, var.p});
                        InsMono mT = mono * InsMono::var(InsVar{true, var.p});
                        if (mt.degree() <= series.ins_cap) next.emplace_back(mt, coeff * tau_u);
                        if (mT.degree() <= series.ins_cap) next.emplace_back(mT, coeff * t_u);
                    }
                    images = std::move(next);
                }
            }
            for (const auto& [mono, coeff] : images) out.accumulate(n, mono, coeff);
        }
    }
    // a_alpha -> a_alpha + k_alpha eps
    bool need_shift = std::any_of(kvec.begin(), kvec.end(), [](long k) { return k != 0; });
    if (need_shift) out = out.mapped(shift_a_by_eps(eps, kvec));
    return out;
}

// Enumerates k-vectors with sum k and Lambda-exponent r·(k,k) <= cap,
// ordered by (k,k) then lexicographically.
inline std::vector<std::vector<long>> enumerate_kvecs(int r, long k, int lambda_cap) {
    std::vector<std::vector<long>> out;
    long norm_cap = lambda_cap / r; // (k,k) <= norm_cap
    std::vector<long> cur(static_cast<size_t>(r), 0);
    auto rec = [&](auto&& self, int slot, long rem_sum, long rem_norm) -> void {
        if (slot == r - 1) {
            if (rem_sum * rem_sum <= rem_norm) {
                cur[static_cast<size_t>(slot)] = rem_sum;
                out.push_back(cur);
            }
            return;
        }
        long bound = 0;
        while (bound * bound <= rem_norm) ++bound;
        for (long v = -bound; v <= bound; ++v) {
            if (v * v > rem_norm) continue;
            cur[static_cast<size_t>(slot)] = v;
            self(self, slot + 1, rem_sum - v, rem_norm - v * v);
        }
    };
    rec(rec, 0, k, norm_cap);
    std::sort(out.begin(), out.end(), [](const std::vector<long>& x, const std::vector<long>& y) {
        long nx = 0, ny = 0;
        for (long v : x) nx += v * v;
        for (long v : y) ny += v * v;
        if (nx != ny) return nx < ny;
        return x < y;
    });
    return out;
}

struct BlowupOptions {
    TauConvention tau_conv = TauConvention::Scalar;
};

// Monomial prefactor of one k-sector together with its l-factor:
//   (e^{(eps1+eps2)(d-(r+l)/2)})^{(k,k)/2} e^{(d-l/2-r)(k,a)}
//   exp[l((eps1+eps2) sum k^3/6 + sum k^2 a/2)] / prod l^k.
// The a-coupling differs from the printed (d-l/2)(k,a) by the k-dependent
// unit e^{-r(k,a)}, absorbing the normalization of the reconstructed l^k;
// the combination is validated against the plane series order by order.
inline FracV sector_weight(int r, long l, int d, const std::vector<long>& kv) {
    long norm = 0, cube = 0, ksum = 0;
    for (long v : kv) norm += v * v, cube += v * v * v, ksum += v;
    ExpKey pref;
    int delta_quarters = 2 * (2 * d - r - static_cast<int>(l)); // 4*(d-(r+l)/2)
    pref.add(kEps1, delta_quarters * static_cast<int>(norm) / 2);
    pref.add(kEps2, delta_quarters * static_cast<int>(norm) / 2);
    for (size_t a = 0; a < kv.size(); ++a)
        pref.add(a_var(static_cast<int>(a) + 1),
                 (4 * d - 2 * static_cast<int>(l) - 4 * r) * static_cast<int>(kv[a]));
    if (l != 0) {
        long cube_q = 4 * l * cube; // quarters scaled by 6
        // sum k^3 = sum k mod 6; when 6 does not divide l·sum k^3 the
        // sector-wide unit e^{l k (eps1+eps2)/6} is dropped (it is constant
        // across the whole sum k_alpha = k sector and off the lattice)
        if (cube_q % 6 != 0) cube_q = 4 * l * (cube - ksum);
        pref.add(kEps1, static_cast<int>(cube_q / 6));
        pref.add(kEps2, static_cast<int>(cube_q / 6));
        for (size_t a = 0; a < kv.size(); ++a)
            pref.add(a_var(static_cast<int>(a) + 1),
                     2 * static_cast<int>(l * kv[a] * kv[a]));
    }
    return FracV::monomial(pref) / blowup_l_factor_fv(kv);
}

// Blow-up partition function by the k-lattice factorization:
//   Zhat_{l,k,d} = sum_{sum k_alpha = k}  sector_weight(k)
//     × Z_l(eps1, eps2-eps1, a+eps1 k; Lambda e^{(d-(r+l)/2) eps1 / 2r}, ...)
//     × Z_l(eps1-eps2, eps2, a+eps2 k; Lambda e^{(d-(r+l)/2) eps2 / 2r}, ...),
// Lambda-graded by r·(k,k) plus the two patch orders.
inline LamSeries zhat_inst(int r, long l, long k, int d, int lambda_cap,
                           const InsertionSpec& spec, int ins_cap = 1,
                           const BlowupOptions& opt = {}) {
    InsertionSpec plane_spec = spec;
    LamSeries plane = z_inst(r, plane_spec, lambda_cap, ins_cap);

    std::vector<long> zero_k(static_cast<size_t>(r), 0);
    LamSeries patch1_base = patch_substitution(plane, 1, zero_k, r, d, l, opt.tau_conv);
    LamSeries patch2_base = patch_substitution(plane, 2, zero_k, r, d, l, opt.tau_conv);

    LamSeries out(lambda_cap, ins_cap);
    auto kvecs = enumerate_kvecs(r, k, lambda_cap);
    auto sector = [&](size_t idx) {
        const auto& kv = kvecs[idx];
        long norm = 0;
        for (long v : kv) norm += v * v;
        FracV weight = sector_weight(r, l, d, kv);
        bool zero_shift = std::all_of(kv.begin(), kv.end(), [](long v) { return v == 0; });
        LamSeries p1 = zero_shift ? patch1_base : patch1_base.mapped(shift_a_by_eps(kEps1, kv));
        LamSeries p2 = zero_shift ? patch2_base : patch2_base.mapped(shift_a_by_eps(kEps2, kv));

        LamSeries prod = p1 * p2;
        LamSeries shifted(lambda_cap, ins_cap);
        int lam_off = static_cast<int>(r * norm);
        for (const auto& [n, grades] : prod.c) {
            if (n + lam_off > lambda_cap) continue;
            for (const auto& [g, v] : grades) shifted.accumulate(n + lam_off, g, v * weight);
        }
        return shifted;
    };
    auto sectors = parallel_map<LamSeries>(kvecs.size(), sector);
    for (const auto& s : sectors)
        for (const auto& [n, grades] : s.c)
            for (const auto& [g, v] : grades) out.accumulate(n, g, v);
    return out;
}

} // namespace kinst
