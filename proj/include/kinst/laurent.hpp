#pragma once

#include <vector>

#include "kinst/errors.hpp"
#include "kinst/rational.hpp"

namespace kinst {

// Coefficient-ring interface used by Laurent<T>: T needs +, -, *, is_zero(),
// is_unit(), inverse(), and a way to make 0 and 1 from a prototype element.
// Rat and RElem satisfy it via the traits below; Laurent<T> itself satisfies
// the arithmetic part, so series can be nested for iterated residues.

template <typename T>
struct RingTraits {
    static T zero(const T& proto) { return proto - proto; }
    static bool is_zero(const T& x) { return x.is_zero(); }
    static bool is_unit(const T& x) { return x.is_unit(); }
    static T inverse(const T& x) { return x.inverse(); }
};

template <>
struct RingTraits<Rat> {
    static Rat zero(const Rat&) { return Rat(0); }
    static bool is_zero(const Rat& x) { return kinst::is_zero(x); }
    static bool is_unit(const Rat& x) { return !kinst::is_zero(x); }
    static Rat inverse(const Rat& x) { return Rat(1) / x; }
};

// Truncated Laurent series: coefficients for powers in [lo, lo+len) are
// exact; every power below lo is exactly zero; powers at lo+len and above
// are unknown.  An empty coefficient vector with len == 0 encodes the exact
// zero series (known to every order).
template <typename T>
struct Laurent {
    int lo = 0;
    std::vector<T> c;
    bool exact_zero = false;

    static Laurent zero() {
        Laurent s;
        s.exact_zero = true;
        return s;
    }

    static Laurent from_coeffs(int lo, std::vector<T> coeffs) {
        Laurent s;
        s.lo = lo;
        s.c = std::move(coeffs);
        return s;
    }

    bool known_zero() const {
        if (exact_zero) return true;
        for (const auto& x : c)
            if (!RingTraits<T>::is_zero(x)) return false;
        return false; // a window of zeros is not the exact zero series
    }

    int hi() const { return lo + static_cast<int>(c.size()) - 1; } // last exact power

    T at(int power, const T& proto) const {
        if (exact_zero || power < lo) return RingTraits<T>::zero(proto);
        if (power > hi()) throw Error("Laurent coefficient requested beyond the exact window");
        return c[static_cast<size_t>(power - lo)];
    }

    // Normalizes: strips leading exact zeros (they sharpen the window).
    void strip() {
        size_t i = 0;
        while (i < c.size() && RingTraits<T>::is_zero(c[i])) ++i;
        if (i > 0) {
            c.erase(c.begin(), c.begin() + static_cast<long>(i));
            lo += static_cast<int>(i);
        }
    }

    Laurent shifted(int d) const {
        if (exact_zero) return *this;
        Laurent s(*this);
        s.lo += d;
        return s;
    }

    Laurent operator-() const {
        Laurent s(*this);
        for (auto& x : s.c) x = RingTraits<T>::zero(x) - x;
        return s;
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        if (a.exact_zero) return b;
        if (b.exact_zero) return a;
        int lo = std::min(a.lo, b.lo);
        int hi = std::min(a.hi(), b.hi());
        if (hi < lo) throw Error("Laurent addition with disjoint exactness windows");
        T proto = !a.c.empty() ? a.c.front() : b.c.front();
        Laurent s;
        s.lo = lo;
        s.c.assign(static_cast<size_t>(hi - lo + 1), RingTraits<T>::zero(proto));
        for (int p = lo; p <= hi; ++p) {
            T v = RingTraits<T>::zero(proto);
            if (p >= a.lo && p <= a.hi()) v = v + a.c[static_cast<size_t>(p - a.lo)];
            if (p >= b.lo && p <= b.hi()) v = v + b.c[static_cast<size_t>(p - b.lo)];
            s.c[static_cast<size_t>(p - lo)] = v;
        }
        return s;
    }

    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        if (a.exact_zero || b.exact_zero) return zero();
        // exact through min(a.hi + b.lo, b.hi + a.lo)
        int lo = a.lo + b.lo;
        int hi = std::min(a.hi() + b.lo, b.hi() + a.lo);
        T proto = RingTraits<T>::zero(a.c.front());
        Laurent s;
        s.lo = lo;
        s.c.assign(static_cast<size_t>(hi - lo + 1), proto);
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (RingTraits<T>::is_zero(a.c[i])) continue;
            for (size_t j = 0; j < b.c.size(); ++j) {
                size_t k = i + j;
                if (k >= s.c.size()) break;
                s.c[k] = s.c[k] + a.c[i] * b.c[j];
            }
        }
        return s;
    }

    // Inverse of a series whose coefficients below the first unit one are
    // nilpotent: f = h^v u (1 + s) with u unit-led and s nilpotent, so
    // 1/f = h^{-v} u^{-1} sum (-s)^j.
    Laurent inverse() const {
        if (exact_zero) throw NonInvertible("inverting the zero series");
        size_t vi = 0;
        while (vi < c.size() && !RingTraits<T>::is_unit(c[vi])) ++vi;
        if (vi == c.size()) throw NonInvertible("no invertible coefficient in the window");
        int v = lo + static_cast<int>(vi);
        T proto = RingTraits<T>::zero(c.front());

        // unit-led part u and the nilpotent prefix s·h^v (relative powers)
        size_t len = c.size() - vi;
        std::vector<T> u(c.begin() + static_cast<long>(vi), c.end());
        // invert u as an ordinary power series
        std::vector<T> uinv(len, proto);
        T lead_inv = RingTraits<T>::inverse(u[0]);
        uinv[0] = lead_inv;
        for (size_t n = 1; n < len; ++n) {
            T acc = proto;
            for (size_t k = 1; k <= n; ++k) acc = acc + u[k] * uinv[n - k];
            uinv[n] = RingTraits<T>::zero(proto) - acc * lead_inv;
        }
        Laurent uinv_s = from_coeffs(-v, std::move(uinv)); // h^{-v} u^{-1}

        if (vi == 0) return uinv_s;

        Laurent s_part;
        s_part.lo = lo - v; // negative powers
        s_part.c.assign(vi + len, proto);
        for (size_t i = 0; i < vi; ++i) s_part.c[i] = c[i];
        // s = (nilpotent prefix) · h^{-v} u^{-1}
        Laurent s_series = from_coeffs(lo, std::vector<T>(c.begin(), c.begin() + static_cast<long>(vi)));
        // pad the prefix window up to the full length so products keep width
        s_series.c.resize(c.size(), proto);
        for (size_t i = vi; i < c.size(); ++i) s_series.c[i] = proto;
        Laurent s_rel = s_series * uinv_s;

        Laurent acc = uinv_s;
        Laurent pw = uinv_s;
        for (int guard = 0; guard < 256; ++guard) {
            pw = pw * (-s_rel);
            bool all_zero = true;
            for (const auto& x : pw.c)
                if (!RingTraits<T>::is_zero(x)) {
                    all_zero = false;
                    break;
                }
            if (all_zero) return acc;
            acc = acc + pw;
        }
        throw NonInvertible("sub-unit coefficients are not nilpotent");
    }

    // Coefficient of h^{-1}; requires the exact window to cover it.
    T residue(const T& proto) const {
        if (exact_zero) return RingTraits<T>::zero(proto);
        if (lo > -1) return RingTraits<T>::zero(proto);
        if (hi() < -1) throw Error("residue outside the exact window");
        return c[static_cast<size_t>(-1 - lo)];
    }
};

template <typename T>
struct RingTraits<Laurent<T>> {
    static Laurent<T> zero(const Laurent<T>&) { return Laurent<T>::zero(); }
    static bool is_zero(const Laurent<T>& x) { return x.known_zero(); }
    static bool is_unit(const Laurent<T>&) { return false; }
    static Laurent<T> inverse(const Laurent<T>& x) { return x.inverse(); }
};

// Multiplies every coefficient by a ring element.
template <typename T>
Laurent<T> scale_series(const Laurent<T>& f, const T& c) {
    if (f.exact_zero) return f;
    Laurent<T> s(f);
    for (auto& x : s.c) x = x * c;
    return s;
}

// Res_{h=0} (h - w)^j for nilpotent w: expands h^j (1 - w/h)^j with the
// binomial series, which terminates by nilpotency.
template <typename T>
Laurent<T> binom_h_minus(const T& w, int j, const T& one, int window) {
    if (j >= 0) {
        Laurent<T> s;
        s.lo = 0;
        s.c.assign(static_cast<size_t>(j + 1 + window), RingTraits<T>::zero(one));
        T wp = one;
        for (int i = 0; i <= j; ++i) {
            Rat coef = Rat(binom(j, i)) * (i % 2 ? Rat(-1) : Rat(1));
            size_t slot = static_cast<size_t>(j - i);
            s.c[slot] = s.c[slot] + wp * coef;
            wp = wp * w;
        }
        return s;
    }
    // h^j sum_{i>=0} C(j, i) (-w)^i h^{-i}: terminates once w^i = 0
    std::vector<T> tail;
    T wp = one;
    int i = 0;
    while (true) {
        // C(j, i) = j (j-1) ... (j-i+1) / i!
        Rat coef(1);
        for (int t = 0; t < i; ++t) coef *= Rat(j - t);
        coef /= Rat(factorial(i));
        if (i % 2) coef = -coef;
        tail.push_back(wp * coef);
        wp = wp * w;
        if (RingTraits<T>::is_zero(wp)) break;
        ++i;
        if (i > 64) throw Error("w is not nilpotent (expansion does not terminate)");
    }
    // tail[i] is the coefficient of h^{j-i}
    std::vector<T> rev(tail.rbegin(), tail.rend());
    int lo = j - static_cast<int>(rev.size()) + 1;
    Laurent<T> s = Laurent<T>::from_coeffs(lo, std::move(rev));
    // everything above power j vanishes exactly: extend the window past 0
    int hi_target = std::max(j, 0) + window;
    s.c.resize(static_cast<size_t>(hi_target - s.lo + 1), RingTraits<T>::zero(one));
    return s;
}

// Res_{h=0} of a Laurent series (the h^{-1} coefficient).
template <typename T>
T residue_hbar(const Laurent<T>& f, const T& proto) {
    return f.residue(proto);
}

// Change of variable x = e^{-h} - 1: substitutes h = -log(1+x), so that
//   Res_h f(h) = -Res_x [ x_transform(f) / (1+x) ].
template <typename T>
Laurent<T> x_transform(const Laurent<T>& f, const T& one, int window) {
    if (f.exact_zero) return Laurent<T>::zero();
    T proto = RingTraits<T>::zero(one);
    // h(x) = -log(1+x) = sum_{k>=1} (-1)^k x^k / k, truncated
    std::vector<T> h(static_cast<size_t>(window), proto);
    for (int k = 1; k < window; ++k) h[static_cast<size_t>(k)] = one * Rat(k % 2 ? -1 : 1, k);
    Laurent<T> hs = Laurent<T>::from_coeffs(0, std::move(h));
    hs.strip();
    Laurent<T> hinv = hs.inverse();

    Laurent<T> unit = Laurent<T>::from_coeffs(0, std::vector<T>(static_cast<size_t>(window), proto));
    unit.c[0] = one;

    Laurent<T> acc = Laurent<T>::zero();
    Laurent<T> p = unit;
    for (int e = -1; e >= f.lo; --e) {
        p = p * hinv;
        T coef = f.at(e, proto);
        if (!RingTraits<T>::is_zero(coef)) acc = acc + scale_series(p, coef);
    }
    Laurent<T> q = unit;
    for (int e = 0; e <= f.hi(); ++e) {
        T coef = f.at(e, proto);
        if (!RingTraits<T>::is_zero(coef)) acc = acc + scale_series(q, coef);
        q = q * hs;
    }
    if (acc.exact_zero && f.hi() >= f.lo) {
        // f had an exact window but every coefficient was zero
        acc = Laurent<T>::from_coeffs(f.lo, std::vector<T>(static_cast<size_t>(window), proto));
    }
    return acc;
}

} // namespace kinst
