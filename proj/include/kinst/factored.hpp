#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kinst/rat_frac.hpp"

namespace kinst {

// A Laurent polynomial in canonical position: componentwise-minimal exponent
// zero, integral coprime coefficients, lexicographically-greatest term
// positive.  Interned so factor multisets compare cheaply.
struct CanonPoly {
    ExpPoly poly;
    size_t cached_hash = 0;
};

using CanonHandle = std::shared_ptr<const CanonPoly>;

struct CanonLess {
    bool operator()(const CanonHandle& x, const CanonHandle& y) const {
        if (x == y) return false;
        const auto& a = x->poly.terms();
        const auto& b = y->poly.terms();
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = 0; i < a.size(); ++i) {
            if (!(a[i].first == b[i].first)) return a[i].first < b[i].first;
            int c = cmp(a[i].second, b[i].second);
            if (c != 0) return c < 0;
        }
        return false;
    }
};

namespace detail {

inline std::mutex& intern_mutex() {
    static std::mutex m;
    return m;
}

inline std::unordered_map<size_t, std::vector<CanonHandle>>& intern_pool() {
    static std::unordered_map<size_t, std::vector<CanonHandle>> pool;
    return pool;
}

inline CanonHandle intern(ExpPoly p) {
    size_t h = p.hash();
    std::lock_guard<std::mutex> lock(intern_mutex());
    auto& bucket = intern_pool()[h];
    for (const auto& cand : bucket)
        if (cand->poly == p) return cand;
    auto handle = std::make_shared<CanonPoly>(CanonPoly{std::move(p), h});
    bucket.push_back(handle);
    return handle;
}

} // namespace detail

// Splits a nonzero polynomial into scalar · e^{mono} · canonical part.
struct CanonSplit {
    Rat scalar;
    ExpKey mono;
    CanonHandle handle; // null when the input was a pure monomial
};

inline CanonSplit canonicalize(const ExpPoly& p) {
    if (p.is_zero()) throw Error("cannot canonicalize the zero polynomial");
    const auto& ts = p.terms();
    if (ts.size() == 1) return {ts[0].second, ts[0].first, nullptr};

    ExpKey cmin = ts[0].first;
    for (const auto& [k, c] : ts)
        for (int v = 0; v < ExpKey::kMaxVars; ++v)
            if (k[v] < cmin[v]) cmin.set(v, k[v]);

    // rational content, signed so the lex-greatest term becomes positive
    Int num_gcd(0), den_lcm(1);
    for (const auto& [k, c] : ts) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rat content(num_gcd, den_lcm);
    content.canonicalize();
    if (sgn(ts.back().second) < 0) content = -content;

    ExpPoly canon = p.times_monomial(-cmin, Rat(1) / content);
    return {content, cmin, detail::intern(std::move(canon))};
}

// Internal carrier for localization weights and series coefficients:
//   value = num · prod_f f^{pow_f}
// with num an expanded polynomial and the f interned canonical polynomials.
// Sums expand only the surplus over the shared factor multiset; no
// polynomial GCD is ever computed.
class FracV {
  public:
    ExpPoly num = ExpPoly::zero();
    std::map<CanonHandle, int, CanonLess> fac;

    FracV() = default;
    explicit FracV(ExpPoly n) : num(std::move(n)) {}
    explicit FracV(const Rat& c) : num(ExpPoly::constant(c)) {}

    static FracV zero() { return FracV(); }
    static FracV one() { return FracV(ExpPoly::one()); }
    static FracV monomial(const ExpKey& k, const Rat& c = Rat(1)) {
        return FracV(ExpPoly::monomial(k, c));
    }

    bool is_zero() const { return num.is_zero(); }

    FracV operator-() const {
        FracV r(*this);
        r.num = -r.num;
        return r;
    }

    // Multiplies by poly^power without expanding (power may be negative).
    void mul_factor(const ExpPoly& poly, int power) {
        if (power == 0) return;
        if (num.is_zero()) return;
        if (poly.is_zero()) {
            if (power < 0) throw DivisionByZero();
            *this = zero();
            return;
        }
        CanonSplit s = canonicalize(poly);
        num = num.times_monomial(s.mono.scaled(power), pow_rat(s.scalar, power));
        if (s.handle) {
            int& e = fac[s.handle];
            e += power;
            if (e == 0) fac.erase(s.handle);
        }
    }

    friend FracV operator*(const FracV& a, const FracV& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        FracV r;
        r.num = a.num * b.num;
        r.fac = a.fac;
        for (const auto& [h, e] : b.fac) {
            int& cur = r.fac[h];
            cur += e;
            if (cur == 0) r.fac.erase(h);
        }
        return r;
    }

    FracV operator*(const Rat& c) const {
        if (kinst::is_zero(c)) return zero();
        FracV r(*this);
        r.num = r.num * c;
        return r;
    }

    FracV inverse() const {
        if (num.is_zero()) throw DivisionByZero();
        FracV r;
        r.num = ExpPoly::one();
        for (const auto& [h, e] : fac) r.fac.emplace(h, -e);
        CanonSplit s = canonicalize(num);
        r.num = r.num.times_monomial(-s.mono, Rat(1) / s.scalar);
        if (s.handle) {
            int& cur = r.fac[s.handle];
            cur -= 1;
            if (cur == 0) r.fac.erase(s.handle);
        }
        return r;
    }

    friend FracV operator/(const FracV& a, const FracV& b) { return a * b.inverse(); }

    friend FracV operator+(const FracV& a, const FracV& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        FracV r;
        // shared part: min of the two powers per factor; each side expands
        // only its surplus over the shared part
        ExpPoly na = a.num, nb = b.num;
        auto ia = a.fac.begin();
        auto ib = b.fac.begin();
        CanonLess less;
        auto expand_into = [](ExpPoly& n, const CanonHandle& h, int e) {
            if (e > 0) n = n * h->poly.pow(e);
        };
        while (ia != a.fac.end() || ib != b.fac.end()) {
            if (ib == b.fac.end() || (ia != a.fac.end() && less(ia->first, ib->first))) {
                // only in a: shared power is min(e,0)
                int shared = std::min(ia->second, 0);
                if (shared != 0) r.fac.emplace(ia->first, shared);
                expand_into(na, ia->first, ia->second - shared);
                expand_into(nb, ia->first, -shared);
                ++ia;
            } else if (ia == a.fac.end() || less(ib->first, ia->first)) {
                int shared = std::min(ib->second, 0);
                if (shared != 0) r.fac.emplace(ib->first, shared);
                expand_into(nb, ib->first, ib->second - shared);
                expand_into(na, ib->first, -shared);
                ++ib;
            } else {
                int shared = std::min(ia->second, ib->second);
                if (shared != 0) r.fac.emplace(ia->first, shared);
                expand_into(na, ia->first, ia->second - shared);
                expand_into(nb, ib->first, ib->second - shared);
                ++ia, ++ib;
            }
        }
        r.num = na + nb;
        if (r.num.is_zero()) return zero();
        return r;
    }

    friend FracV operator-(const FracV& a, const FracV& b) { return a + (-b); }

    // Expanded formal fraction: positive powers to the numerator, negative
    // to the denominator.
    RatFrac to_rat_frac() const {
        ExpPoly n = num, d = ExpPoly::one();
        for (const auto& [h, e] : fac) {
            if (e > 0)
                n = n * h->poly.pow(e);
            else
                d = d * h->poly.pow(-e);
        }
        return RatFrac(std::move(n), std::move(d));
    }

    Rat eval(const std::vector<Rat>& u) const {
        Rat v = num.eval(u);
        for (const auto& [h, e] : fac) {
            Rat f = h->poly.eval(u);
            if (kinst::is_zero(f)) {
                if (e < 0) throw GridExhausted("factor vanishes at evaluation point");
                return Rat(0);
            }
            v *= pow_rat(f, e);
        }
        return v;
    }

    friend FracV substitute_linear(const FracV& f, const LinearMap& s) {
        FracV r;
        r.num = substitute_linear(f.num, s);
        if (r.num.is_zero()) return zero();
        for (const auto& [h, e] : f.fac) r.mul_factor(substitute_linear(h->poly, s), e);
        return r;
    }
};

// Exact semantic equality: the difference collapses over the shared factors
// and the surplus cross-product must be the zero polynomial.
inline bool equal_exact(const FracV& a, const FracV& b) { return (a - b).is_zero(); }

// Grid-based equality after cancelling the shared factors from both sides.
inline bool equal_grid(const FracV& a, const FracV& b) {
    FracV ra = a, rb = b;
    for (auto it = ra.fac.begin(); it != ra.fac.end();) {
        auto jt = rb.fac.find(it->first);
        if (jt != rb.fac.end()) {
            int shared = (it->second > 0) == (jt->second > 0)
                             ? (std::abs(it->second) < std::abs(jt->second) ? it->second : jt->second)
                             : 0;
            if (shared != 0) {
                it->second -= shared;
                jt->second -= shared;
                if (jt->second == 0) rb.fac.erase(jt);
                if (it->second == 0) {
                    it = ra.fac.erase(it);
                    continue;
                }
            }
        }
        ++it;
    }
    return frac_equal(ra.to_rat_frac(), rb.to_rat_frac(), EqualMode::Grid);
}

} // namespace kinst
