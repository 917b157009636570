#pragma once

#include <array>
#include <string>
#include <vector>

#include "kinst/exp_poly.hpp"

namespace kinst {

// Formal fraction of two exponential polynomials.  Never auto-reduced:
// the normal form is "as constructed" and equality is semantic, via
// cross-multiplication or exact grid evaluation.
struct RatFrac {
    ExpPoly num;
    ExpPoly den = ExpPoly::one();

    RatFrac() = default;
    RatFrac(ExpPoly n, ExpPoly d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw Error("RatFrac with zero denominator");
    }

    static RatFrac of(ExpPoly p) { return RatFrac(std::move(p), ExpPoly::one()); }
    static RatFrac zero() { return of(ExpPoly::zero()); }
    static RatFrac one() { return of(ExpPoly::one()); }

    bool is_zero() const { return num.is_zero(); }

    RatFrac operator-() const { return RatFrac(-num, den); }
};

inline RatFrac operator+(const RatFrac& a, const RatFrac& b) {
    return RatFrac(a.num * b.den + b.num * a.den, a.den * b.den);
}

inline RatFrac operator-(const RatFrac& a, const RatFrac& b) { return a + (-b); }

inline RatFrac operator*(const RatFrac& a, const RatFrac& b) {
    return RatFrac(a.num * b.num, a.den * b.den);
}

inline RatFrac operator/(const RatFrac& a, const RatFrac& b) {
    if (b.num.is_zero()) throw DivisionByZero();
    return RatFrac(a.num * b.den, a.den * b.num);
}

enum class EqualMode { CrossMul, Grid };

inline bool frac_equal_cross(const RatFrac& a, const RatFrac& b) {
    return (a.num * b.den) == (b.num * a.den);
}

// Exact polynomial identity testing on a rational grid.  The grid per
// variable is strictly larger than the exponent span of the cross products
// a.num·b.den and b.num·a.den, so vanishing on the whole grid is equivalent
// to the cross-multiplied difference being the zero polynomial.  Grids that
// hit a denominator zero are shifted; after the retry budget the denominator
// is considered degenerate.
inline bool frac_equal_grid(const RatFrac& a, const RatFrac& b) {
    std::array<int, ExpKey::kMaxVars> lo1{}, hi1{}, lo2{}, hi2{}, lo{}, hi{};
    auto widen = [&](const ExpPoly& p, const ExpPoly& q) {
        p.span(lo1, hi1);
        q.span(lo2, hi2);
        for (int v = 0; v < ExpKey::kMaxVars; ++v) {
            lo[static_cast<size_t>(v)] = std::min(lo[static_cast<size_t>(v)],
                                                  lo1[static_cast<size_t>(v)] + lo2[static_cast<size_t>(v)]);
            hi[static_cast<size_t>(v)] = std::max(hi[static_cast<size_t>(v)],
                                                  hi1[static_cast<size_t>(v)] + hi2[static_cast<size_t>(v)]);
        }
    };
    lo.fill(0);
    hi.fill(0);
    widen(a.num, b.den);
    widen(b.num, a.den);

    std::vector<int> active;
    std::vector<int> count;
    for (int v = 0; v < ExpKey::kMaxVars; ++v) {
        int span = hi[static_cast<size_t>(v)] - lo[static_cast<size_t>(v)];
        if (span > 0) {
            active.push_back(v);
            count.push_back(span + 1);
        }
    }

    constexpr int kRetryBudget = 8;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        // variable v takes values offset + t, t = 0..span
        Rat offset = Rat(2) + Rat(attempt, attempt + 1);
        std::vector<size_t> idx(active.size(), 0);
        bool grid_ok = true;
        while (true) {
            std::vector<Rat> u(ExpKey::kMaxVars, Rat(1));
            for (size_t j = 0; j < active.size(); ++j)
                u[static_cast<size_t>(active[j])] = offset + Rat(static_cast<long>(idx[j]));
            Rat da = a.den.eval(u), db = b.den.eval(u);
            if (kinst::is_zero(da) || kinst::is_zero(db)) {
                grid_ok = false;
                break;
            }
            if (a.num.eval(u) * db != b.num.eval(u) * da) return false;
            // advance the mixed-radix counter
            size_t j = 0;
            for (; j < idx.size(); ++j) {
                if (++idx[j] < static_cast<size_t>(count[j])) break;
                idx[j] = 0;
            }
            if (j == idx.size()) break;
            if (idx.empty()) break;
        }
        if (grid_ok) return true;
    }
    throw GridExhausted("no zero-free evaluation grid found: degenerate denominator");
}

inline bool frac_equal(const RatFrac& a, const RatFrac& b, EqualMode mode = EqualMode::CrossMul) {
    return mode == EqualMode::CrossMul ? frac_equal_cross(a, b) : frac_equal_grid(a, b);
}

inline RatFrac substitute_linear(const RatFrac& f, const LinearMap& s) {
    return RatFrac(substitute_linear(f.num, s), substitute_linear(f.den, s));
}

inline std::string to_string(const RatFrac& f) {
    return "(" + f.num.str() + ") / (" + f.den.str() + ")";
}

} // namespace kinst
