#pragma once

#include <functional>
#include <vector>

#include "kinst/laurent.hpp"
#include "kinst/trunc_ring.hpp"

namespace kinst {

// K-theory class presented by its virtual rank and Chern classes in a
// truncated ring.
struct ClassData {
    long rank = 0;
    std::vector<RElem> chern; // c_1, c_2, ...; trailing zeros may be omitted
};

using RLaurent = Laurent<RElem>;

// Equivariant Euler class of alpha ⊗ I_n:
//   e(alpha ⊗ I_n) = sum_{i>=0} c_i(alpha) (n hbar)^{r(alpha)-i},
// a Laurent polynomial in hbar, exact on the full requested window.
inline RLaurent euler_twist(const ClassData& alpha, const Rat& n, const TruncRingPtr& ring,
                            int window) {
    RElem one(ring, Rat(1));
    // support [rank - #chern, rank]; a polynomial is exactly zero elsewhere,
    // so the window only needs explicit zeros above the top degree
    int wlo = static_cast<int>(alpha.rank) - static_cast<int>(alpha.chern.size());
    int whi = std::max(static_cast<int>(alpha.rank), window);
    std::vector<RElem> c(static_cast<size_t>(whi - wlo + 1), RElem(ring));
    for (size_t i = 0; i <= alpha.chern.size(); ++i) {
        RElem ci = i == 0 ? one : alpha.chern[i - 1];
        long power = alpha.rank - static_cast<long>(i);
        Rat scale = pow_rat(n, power);
        c[static_cast<size_t>(power - wlo)] = ci * scale;
    }
    return RLaurent::from_coeffs(wlo, std::move(c));
}

// Power sums from Chern classes by Newton's identities, truncated by the
// ring's nilpotency (p_m is homogeneous of degree m).
inline std::vector<RElem> power_sums(const ClassData& alpha, const TruncRingPtr& ring, int count) {
    std::vector<RElem> p(static_cast<size_t>(count) + 1, RElem(ring));
    auto chern = [&](int i) -> RElem {
        if (i == 0) return RElem(ring, Rat(1));
        if (i < 0 || static_cast<size_t>(i) > alpha.chern.size()) return RElem(ring);
        return alpha.chern[static_cast<size_t>(i - 1)];
    };
    for (int m = 1; m <= count; ++m) {
        // p_m = c_1 p_{m-1} - c_2 p_{m-2} + ... + (-1)^m (-1) m c_m
        RElem acc = chern(m) * Rat(m) * Rat((m % 2 == 0) ? -1 : 1);
        for (int i = 1; i < m; ++i) {
            RElem term = chern(i) * p[static_cast<size_t>(m - i)];
            acc = acc + term * Rat((i % 2 == 0) ? -1 : 1);
        }
        p[static_cast<size_t>(m)] = acc;
    }
    return p;
}

// ch Lambda^p of the dual with roots e^{-s_i}: elementary symmetric values
// e'_p from the twisted power sums q_k = rank + sum_m (-k)^m p_m / m!.
inline std::vector<RElem> dual_exp_elementary(const ClassData& alpha, const TruncRingPtr& ring) {
    int rho = static_cast<int>(alpha.rank);
    if (rho < 0) throw NonInvertible("exterior-power expansion needs an honest bundle");
    int depth = 0;
    for (int nil : ring->nilpotency) depth += nil - 1;
    std::vector<RElem> p = power_sums(alpha, ring, depth);
    std::vector<RElem> q(static_cast<size_t>(rho) + 1, RElem(ring));
    for (int k = 1; k <= rho; ++k) {
        RElem acc(ring, Rat(alpha.rank));
        Rat km(1);
        for (int m = 1; m <= depth; ++m) {
            km *= Rat(-k);
            acc = acc + p[static_cast<size_t>(m)] * (km / Rat(factorial(m)));
        }
        q[static_cast<size_t>(k)] = acc;
    }
    std::vector<RElem> e(static_cast<size_t>(rho) + 1, RElem(ring));
    e[0] = RElem(ring, Rat(1));
    for (int m = 1; m <= rho; ++m) {
        RElem acc(ring);
        Rat sign(1);
        for (int k = 1; k <= m; ++k) {
            acc = acc + e[static_cast<size_t>(m - k)] * q[static_cast<size_t>(k)] * sign;
            sign = -sign;
        }
        e[static_cast<size_t>(m)] = acc * Rat(1, m);
    }
    return e;
}

enum class TwistVar { Hbar, X };

// K-theoretic Euler class of alpha ⊗ e^{sign·hbar} (sign = ±1):
//   e^K = prod_i (1 - e^{-s_i} e^{-sign·hbar}) = sum_p (-1)^p e'_p e^{-p·sign·hbar},
// expanded either in hbar or in x = e^{-hbar} - 1 (where e^{-hbar} = 1 + x).
inline RLaurent ek_twist(const ClassData& alpha, int sign, TwistVar var, const TruncRingPtr& ring,
                         int window) {
    std::vector<RElem> e = dual_exp_elementary(alpha, ring);
    RElem zero(ring);
    // both expansions are power series in the variable: support [0, window]
    std::vector<RElem> c(static_cast<size_t>(window + 1), zero);
    int wlo = 0;
    for (int p = 0; p < static_cast<int>(e.size()); ++p) {
        RElem coef = e[static_cast<size_t>(p)] * Rat(p % 2 ? -1 : 1);
        if (coef.is_zero()) continue;
        long m = -static_cast<long>(sign) * p; // contributes e^{m·hbar}
        for (int k = 0; k <= window; ++k) {
            size_t slot = static_cast<size_t>(k - wlo);
            Rat scale;
            if (var == TwistVar::Hbar) {
                // e^{m hbar} = sum_k (m hbar)^k / k!
                scale = pow_rat(Rat(m), k) / Rat(factorial(k));
            } else {
                // e^{-hbar} = 1 + x, so e^{m hbar} = (1+x)^{-m}
                scale = Rat(1);
                for (int t = 0; t < k; ++t) scale *= rat(-m - t, t + 1);
            }
            if (!kinst::is_zero(scale)) c[slot] = c[slot] + coef * scale;
        }
    }
    return RLaurent::from_coeffs(wlo, std::move(c));
}

// One factor of the cohomological wall-crossing kernel at level m = 0:
//   1 / ( e(N(flat, C) ⊗ e^{-hbar}) · e(N(C, flat) ⊗ e^{hbar}) ).
inline RLaurent psi1_factor(const ClassData& n_flat_c, const ClassData& n_c_flat,
                            const TruncRingPtr& ring, int window) {
    RLaurent d1 = euler_twist(n_flat_c, Rat(-1), ring, window);
    RLaurent d2 = euler_twist(n_c_flat, Rat(1), ring, window);
    return (d1 * d2).inverse();
}

// Iterated-residue kernel of the weak wall-crossing formula.  The Phi
// insertion is the caller's class evaluated on the hbar variables; with
// j = 1 this is
//   Res_{hbar=0}  Phi(hbar) / ( e(N(flat,C) ⊗ e^{-hbar}) e(N(C,flat) ⊗ e^{hbar}) ).
inline RElem psi_kernel_j1(const ClassData& n_flat_c, const ClassData& n_c_flat,
                           const RLaurent& phi, const TruncRingPtr& ring, int window) {
    RLaurent integrand = phi * psi1_factor(n_flat_c, n_c_flat, ring, window);
    return integrand.residue(RElem(ring));
}

// j = 2: kernel (1/2!)·prod_{i1 != i2}(-hbar_{i1}+hbar_{i2}) / prod_i e(...)e(...)
// with the iterated residue Res_{hbar_2} Res_{hbar_1}.  Phi is supplied on
// the two variables as a nested series (hbar_1 inner, hbar_2 outer).
using RLaurent2 = Laurent<RLaurent>;

// Wide constant-in-hbar_1 coefficient.
inline RLaurent const_inner(const RElem& x, const TruncRingPtr& ring, int window) {
    std::vector<RElem> c(static_cast<size_t>(window), RElem(ring));
    c[0] = x;
    return RLaurent::from_coeffs(0, std::move(c));
}

// f(hbar_1), constant in hbar_2.
inline RLaurent2 promote_inner(const RLaurent& f, const TruncRingPtr& ring, int window) {
    (void)ring;
    std::vector<RLaurent> c(static_cast<size_t>(window), RLaurent::zero());
    c[0] = f;
    return RLaurent2::from_coeffs(0, std::move(c));
}

// f(hbar_2), constant in hbar_1.
inline RLaurent2 promote_outer(const RLaurent& f, const TruncRingPtr& ring, int window) {
    std::vector<RLaurent> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(const_inner(x, ring, window));
    return RLaurent2::from_coeffs(f.lo, std::move(c));
}

// c1·hbar_1 + c2·hbar_2 with wide exact windows.
inline RLaurent2 linear_form(const Rat& c1, const Rat& c2, const TruncRingPtr& ring, int window) {
    RElem one(ring, Rat(1));
    std::vector<RElem> inner(static_cast<size_t>(window), RElem(ring));
    inner[1] = one * c1;
    std::vector<RLaurent> outer(static_cast<size_t>(window), RLaurent::zero());
    outer[0] = RLaurent::from_coeffs(0, std::move(inner));
    outer[1] = const_inner(one * c2, ring, window);
    for (size_t i = 2; i < outer.size(); ++i) outer[i] = const_inner(RElem(ring), ring, window);
    return RLaurent2::from_coeffs(0, std::move(outer));
}

// The antisymmetrization factor prod_{i1 != i2} (-hbar_{i1} + hbar_{i2}) at j=2.
inline RLaurent2 cross_factor_j2(const TruncRingPtr& ring, int window) {
    return linear_form(Rat(-1), Rat(1), ring, window) * linear_form(Rat(1), Rat(-1), ring, window);
}

inline RElem psi_kernel_j2(const ClassData& n_flat_c, const ClassData& n_c_flat,
                           const RLaurent2& phi, const TruncRingPtr& ring, int window) {
    RLaurent f1 = psi1_factor(n_flat_c, n_c_flat, ring, window);
    RLaurent2 k1 = promote_inner(f1, ring, window);
    RLaurent2 k2 = promote_outer(f1, ring, window);
    RLaurent2 integrand = phi * cross_factor_j2(ring, window) * k1 * k2;
    // iterated residue: the hbar_1^{-1} hbar_2^{-1} coefficient, halved (1/2!)
    RLaurent res_outer = integrand.residue(RLaurent::zero());
    return res_outer.residue(RElem(ring)) * Rat(1, 2);
}

// Kernel dispatch on the residue depth.
inline RElem psi_kernel(int j, const ClassData& n_flat_c, const ClassData& n_c_flat,
                        const RLaurent& phi1, const TruncRingPtr& ring, int window) {
    if (j == 1) return psi_kernel_j1(n_flat_c, n_c_flat, phi1, ring, window);
    if (j == 2)
        return psi_kernel_j2(n_flat_c, n_c_flat, promote_inner(phi1, ring, window), ring, window);
    throw RangeViolation("psi_kernel supports residue depth j = 1 or 2");
}

// Pushforward over P^{r-1}: the coefficient of h^{r-1}.
inline Rat integrate_proj(int r, const RElem& x) {
    std::vector<int> mono{r - 1};
    return x.coeff(mono);
}

// Built-in first-instanton example data: on P^{r-1},
//   N(E_flat, C_0) = O(-1),  N(C_0, E_flat) = O(1)^2 ⊕ S,
// with S the universal subbundle (total Chern class 1/(1+h)).
struct ExampleData {
    TruncRingPtr ring;
    ClassData n_flat_c; // rank 1, c_1 = -h
    ClassData n_c_flat; // rank r+1, total Chern class 1+h
    RElem h;
};

inline ExampleData example_data(int r) {
    ExampleData d;
    d.ring = projective_ring(r);
    d.h = RElem::generator(d.ring, 0);
    d.n_flat_c.rank = 1;
    d.n_flat_c.chern = {-d.h};
    d.n_c_flat.rank = r + 1;
    d.n_c_flat.chern = {d.h};
    return d;
}

// The first-instanton blow-up coefficient with the mu-class insertion and
// all equivariant parameters and masses set to zero:
//   int_{P^{r-1}} Res_h  (-h-hbar)^{2r-N_f} (-hbar)^{N_f}
//                        / ( e(O(-1) ⊗ e^{-hbar}) · e(O(1)^2 ⊕ S ⊗ e^{hbar}) ).
inline Rat example_blowup_coeff(int r, int n_f) {
    if (2 * r - n_f < 1 || n_f < 0)
        throw RangeViolation("example needs 0 <= N_f <= 2r - 1");
    ExampleData d = example_data(r);
    int window = 6 * r + 12;
    RElem one(d.ring, Rat(1));
    RElem zero(d.ring);

    // Phi = mu(C)^{2r-N_f} · prod_f (m_f - hbar) at eps = m = 0
    RLaurent mu = RLaurent::from_coeffs(0, std::vector<RElem>{-d.h, -one});
    mu.c.resize(static_cast<size_t>(window), zero);
    RLaurent mhbar = RLaurent::from_coeffs(0, std::vector<RElem>{zero, -one});
    mhbar.c.resize(static_cast<size_t>(window), zero);
    RLaurent phi = RLaurent::from_coeffs(0, std::vector<RElem>(static_cast<size_t>(window), zero));
    phi.c[0] = one;
    for (int i = 0; i < 2 * r - n_f; ++i) phi = phi * mu;
    for (int i = 0; i < n_f; ++i) phi = phi * mhbar;

    RElem res = psi_kernel_j1(d.n_flat_c, d.n_c_flat, phi, d.ring, window);
    return integrate_proj(r, res);
}

} // namespace kinst
