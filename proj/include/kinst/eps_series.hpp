#pragma once

#include <map>
#include <utility>
#include <vector>

#include "kinst/factored.hpp"

namespace kinst {

// Truncated Laurent expansion in eps1 along the direction eps2 = c·eps1.
// Coefficients are fractions in the a-exponentials only.
struct EpsSeries {
    int lead = 0;              // exact valuation (lowest eps1 power)
    std::vector<FracV> coeff;  // coeff[i] is the eps1^{lead+i} coefficient
    int order = 0;             // coefficients are exact through eps1^{order}

    FracV at(int power) const {
        if (power < lead || power > order) return FracV::zero();
        size_t i = static_cast<size_t>(power - lead);
        return i < coeff.size() ? coeff[i] : FracV::zero();
    }
};

namespace detail {

// A polynomial collapsed along eps2 = c·eps1: finitely many terms
// coeff · e^{q eps1} · e^{A} with q rational and A an a-lattice monomial,
// merged exactly.  Empty means the polynomial vanishes identically on the
// direction line.
struct Collapsed {
    // (a-monomial, q) -> coefficient
    std::map<std::pair<ExpKey, Rat>, Rat> terms;
    bool empty() const { return terms.empty(); }
};

inline Collapsed collapse(const ExpPoly& p, const Rat& c) {
    Collapsed out;
    for (const auto& [k, coeff] : p.terms()) {
        Rat q = rat(k[kEps1], 4) + c * rat(k[kEps2], 4);
        q.canonicalize();
        ExpKey a = k;
        a.set(kEps1, 0);
        a.set(kEps2, 0);
        auto key = std::make_pair(a, q);
        auto it = out.terms.find(key);
        if (it == out.terms.end()) {
            out.terms.emplace(key, coeff);
        } else {
            it->second += coeff;
            if (kinst::is_zero(it->second)) out.terms.erase(it);
        }
    }
    return out;
}

// eps1-Taylor coefficient k! · [eps1^k] of the collapsed sum.
inline FracV taylor_coeff(const Collapsed& col, int k) {
    ExpPoly acc;
    Rat kfact(factorial(k));
    for (const auto& [key, c] : col.terms) {
        Rat val = c * pow_rat(key.second, k) / kfact;
        if (!kinst::is_zero(val)) acc = acc + ExpPoly::monomial(key.first, val);
    }
    return FracV(acc);
}

// Valuation of a nonidentically-zero exponential sum: bounded by the largest
// number of distinct frequencies sharing one a-monomial (Vandermonde).
inline int collapsed_valuation(const Collapsed& col) {
    std::map<ExpKey, int> group_sizes;
    for (const auto& [key, c] : col.terms) group_sizes[key.first]++;
    int bound = 0;
    for (const auto& [a, n] : group_sizes) bound = std::max(bound, n);
    for (int k = 0; k < bound; ++k)
        if (!taylor_coeff(col, k).is_zero()) return k;
    return bound; // coefficient at `bound` must be nonzero by Vandermonde
}

struct UnitSeries {
    int valuation = 0;
    std::vector<FracV> u; // unit part, u[0] nonzero
};

inline std::vector<FracV> series_mul(const std::vector<FracV>& a, const std::vector<FracV>& b,
                                     size_t len) {
    std::vector<FracV> r(len, FracV::zero());
    for (size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size() && i + j < len; ++j)
            if (!b[j].is_zero()) r[i + j] = r[i + j] + a[i] * b[j];
    }
    return r;
}

inline std::vector<FracV> series_inverse(const std::vector<FracV>& a, size_t len) {
    std::vector<FracV> r(len, FracV::zero());
    FracV inv0 = a[0].inverse();
    r[0] = inv0;
    for (size_t n = 1; n < len; ++n) {
        FracV s = FracV::zero();
        for (size_t k = 1; k <= n && k < a.size(); ++k)
            if (!a[k].is_zero()) s = s + a[k] * r[n - k];
        r[n] = -(s * inv0);
    }
    return r;
}

inline UnitSeries expand_unit(const Collapsed& col, int val, size_t len) {
    UnitSeries s;
    s.valuation = val;
    s.u.resize(len, FracV::zero());
    for (size_t i = 0; i < len; ++i) s.u[i] = taylor_coeff(col, val + static_cast<int>(i));
    return s;
}

} // namespace detail

// Laurent expansion in eps1 with eps2 = c·eps1, exact through eps1^order.
// Degenerate directions (a factor vanishing identically on the line) are
// detected and rejected.
inline EpsSeries expand_eps_series(const FracV& x, const Rat& c, int order) {
    if (kinst::is_zero(c)) throw ConfigError("direction c must be nonzero");
    if (x.is_zero()) {
        EpsSeries s;
        s.lead = order + 1;
        s.order = order;
        return s;
    }

    struct Piece {
        detail::Collapsed col;
        int val;
        int power;
    };
    std::vector<Piece> pieces;

    detail::Collapsed num_col = detail::collapse(x.num, c);
    if (num_col.empty()) {
        EpsSeries s;
        s.lead = order + 1;
        s.order = order;
        return s;
    }
    pieces.push_back({num_col, detail::collapsed_valuation(num_col), 1});
    for (const auto& [h, e] : x.fac) {
        detail::Collapsed col = detail::collapse(h->poly, c);
        if (col.empty())
            throw ConfigError("direction eps2 = c*eps1 zeroes a factor identically");
        pieces.push_back({col, detail::collapsed_valuation(col), e});
    }

    long lead = 0;
    for (const auto& p : pieces) lead += static_cast<long>(p.val) * p.power;

    EpsSeries s;
    s.lead = static_cast<int>(lead);
    s.order = order;
    if (lead > order) return s; // zero through the requested order

    size_t len = static_cast<size_t>(order - lead + 1);
    std::vector<FracV> acc(len, FracV::zero());
    acc[0] = FracV::one();
    for (const auto& p : pieces) {
        detail::UnitSeries u = detail::expand_unit(p.col, p.val, len);
        std::vector<FracV> body =
            p.power > 0 ? u.u : detail::series_inverse(u.u, len);
        int reps = std::abs(p.power);
        for (int i = 0; i < reps; ++i) acc = detail::series_mul(acc, body, len);
    }
    s.coeff = std::move(acc);
    return s;
}

inline EpsSeries expand_eps_series(const RatFrac& x, const Rat& c, int order) {
    FracV v(x.num);
    if (!x.den.is_one()) v.mul_factor(x.den, -1);
    return expand_eps_series(v, c, order);
}

} // namespace kinst
