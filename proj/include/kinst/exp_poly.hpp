#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kinst/errors.hpp"
#include "kinst/rational.hpp"

namespace kinst {

// Exponent vector of a Laurent monomial in the exponential variables
// e^{eps1}, e^{eps2}, e^{a_1}, ..., stored in units of 1/4 (the lattice is
// closed under every half- and quarter-shift the blow-up formulas produce).
// Up to kMaxVars basis symbols; unused lanes stay zero.
struct ExpKey {
    static constexpr int kMaxVars = 8;
    std::array<int16_t, kMaxVars> lane{};

    int16_t operator[](int v) const { return lane[static_cast<size_t>(v)]; }

    void set(int v, long quarters) {
        if (quarters < INT16_MIN || quarters > INT16_MAX)
            throw LatticeOverflow("exponent exceeds the representable lattice range");
        lane[static_cast<size_t>(v)] = static_cast<int16_t>(quarters);
    }

    void add(int v, long quarters) { set(v, static_cast<long>(lane[static_cast<size_t>(v)]) + quarters); }

    bool is_zero() const {
        for (int16_t x : lane)
            if (x != 0) return false;
        return true;
    }

    ExpKey operator+(const ExpKey& o) const {
        ExpKey r;
        for (int i = 0; i < kMaxVars; ++i)
            r.set(i, static_cast<long>(lane[i]) + o.lane[i]);
        return r;
    }

    ExpKey operator-() const {
        ExpKey r;
        for (int i = 0; i < kMaxVars; ++i) r.set(i, -static_cast<long>(lane[i]));
        return r;
    }

    ExpKey scaled(long m) const {
        ExpKey r;
        for (int i = 0; i < kMaxVars; ++i) r.set(i, static_cast<long>(lane[i]) * m);
        return r;
    }

    // Packs lanes (biased) into a big-endian pair of words; lexicographic
    // order on exponent tuples coincides with comparing the packed value.
    std::pair<uint64_t, uint64_t> packed() const {
        uint64_t hi = 0, lo = 0;
        for (int i = 0; i < 4; ++i)
            hi = (hi << 16) | static_cast<uint16_t>(static_cast<int32_t>(lane[i]) + 0x8000);
        for (int i = 4; i < 8; ++i)
            lo = (lo << 16) | static_cast<uint16_t>(static_cast<int32_t>(lane[i]) + 0x8000);
        return {hi, lo};
    }

    friend bool operator==(const ExpKey& a, const ExpKey& b) { return a.lane == b.lane; }
    friend bool operator<(const ExpKey& a, const ExpKey& b) { return a.packed() < b.packed(); }
};

struct ExpKeyHash {
    size_t operator()(const ExpKey& k) const {
        auto [hi, lo] = k.packed();
        uint64_t h = hi * 0x9e3779b97f4a7c15ULL;
        h ^= lo + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

// Names the basis symbols: slot 0, 1 are eps1, eps2; slots 2.. are a_1, a_2, ...
inline std::string var_name(int v) {
    if (v == 0) return "eps1";
    if (v == 1) return "eps2";
    return "a" + std::to_string(v - 1);
}

inline constexpr int kEps1 = 0;
inline constexpr int kEps2 = 1;
inline constexpr int a_var(int alpha) { return 1 + alpha; } // alpha is 1-based

// Exact Laurent polynomial in the exponential variables: a finite sum of
// nonzero rational coefficients over distinct quarter-lattice exponents,
// kept sorted lexicographically so serialization is bit-stable.
class ExpPoly {
  public:
    using Term = std::pair<ExpKey, Rat>;

    ExpPoly() = default;

    static ExpPoly zero() { return ExpPoly(); }

    static ExpPoly constant(const Rat& c) {
        ExpPoly p;
        if (!kinst::is_zero(c)) p.terms_.emplace_back(ExpKey{}, c);
        return p;
    }

    static ExpPoly one() { return constant(Rat(1)); }

    static ExpPoly monomial(const ExpKey& k, const Rat& c = Rat(1)) {
        ExpPoly p;
        if (!kinst::is_zero(c)) p.terms_.emplace_back(k, c);
        return p;
    }

    // e^{(q/4)·var}
    static ExpPoly exp_quarters(int var, long quarters, const Rat& c = Rat(1)) {
        ExpKey k;
        k.set(var, quarters);
        return monomial(k, c);
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    bool is_monomial() const { return terms_.size() == 1; }
    bool is_one() const {
        return terms_.size() == 1 && terms_[0].first.is_zero() && terms_[0].second == 1;
    }

    Rat coeff(const ExpKey& k) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                                   [](const Term& t, const ExpKey& key) { return t.first < key; });
        if (it != terms_.end() && it->first == k) return it->second;
        return Rat(0);
    }

    ExpPoly operator-() const {
        ExpPoly r(*this);
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
        ExpPoly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() && ib != b.terms_.end()) {
            if (ia->first == ib->first) {
                Rat c = ia->second + ib->second;
                if (!kinst::is_zero(c)) r.terms_.emplace_back(ia->first, c);
                ++ia, ++ib;
            } else if (ia->first < ib->first) {
                r.terms_.push_back(*ia++);
            } else {
                r.terms_.push_back(*ib++);
            }
        }
        r.terms_.insert(r.terms_.end(), ia, a.terms_.end());
        r.terms_.insert(r.terms_.end(), ib, b.terms_.end());
        return r;
    }

    friend ExpPoly operator-(const ExpPoly& a, const ExpPoly& b) { return a + (-b); }

    friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
        if (a.is_zero() || b.is_zero()) return ExpPoly();
        if (b.is_monomial()) return a.times_monomial(b.terms_[0].first, b.terms_[0].second);
        if (a.is_monomial()) return b.times_monomial(a.terms_[0].first, a.terms_[0].second);
        std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
        acc.reserve(a.terms_.size() * 2);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) acc[ka + kb] += ca * cb;
        return from_map(acc);
    }

    ExpPoly times_monomial(const ExpKey& k, const Rat& c) const {
        if (kinst::is_zero(c)) return ExpPoly();
        ExpPoly r;
        r.terms_.reserve(terms_.size());
        for (const auto& [key, coeff] : terms_) r.terms_.emplace_back(key + k, coeff * c);
        // a uniform shift preserves lexicographic order
        return r;
    }

    ExpPoly operator*(const Rat& c) const {
        if (kinst::is_zero(c)) return ExpPoly();
        ExpPoly r(*this);
        for (auto& t : r.terms_) t.second *= c;
        return r;
    }

    // The dual: negates every exponent tuple.
    ExpPoly negate_exponents() const {
        ExpPoly r;
        r.terms_.reserve(terms_.size());
        for (const auto& [k, c] : terms_) r.terms_.emplace_back(-k, c);
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        return r;
    }

    // Adams scaling of exponents by an integer p.
    ExpPoly scale_exponents(long p) const {
        if (p == 1) return *this;
        if (p == 0) { // everything collapses onto the zero exponent
            Rat total(0);
            for (const auto& [k, c] : terms_) total += c;
            return constant(total);
        }
        ExpPoly r;
        r.terms_.reserve(terms_.size());
        for (const auto& [k, c] : terms_) r.terms_.emplace_back(k.scaled(p), c);
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        return r;
    }

    ExpPoly pow(long e) const {
        if (e < 0) throw Error("ExpPoly::pow expects a nonnegative exponent");
        ExpPoly acc = one();
        ExpPoly base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    // Per-variable exponent span (in quarter units), as [min, max].
    void span(std::array<int, ExpKey::kMaxVars>& lo, std::array<int, ExpKey::kMaxVars>& hi) const {
        lo.fill(0);
        hi.fill(0);
        bool first = true;
        for (const auto& [k, c] : terms_) {
            for (int v = 0; v < ExpKey::kMaxVars; ++v) {
                int e = k[v];
                if (first) {
                    lo[static_cast<size_t>(v)] = hi[static_cast<size_t>(v)] = e;
                } else {
                    lo[static_cast<size_t>(v)] = std::min(lo[static_cast<size_t>(v)], e);
                    hi[static_cast<size_t>(v)] = std::max(hi[static_cast<size_t>(v)], e);
                }
            }
            first = false;
        }
    }

    // Evaluates with u_v substituted for e^{var_v / 4}.
    Rat eval(const std::vector<Rat>& u) const {
        Rat total(0);
        for (const auto& [k, c] : terms_) {
            Rat t = c;
            for (int v = 0; v < ExpKey::kMaxVars; ++v) {
                int e = k[v];
                if (e != 0) {
                    if (static_cast<size_t>(v) >= u.size())
                        throw Error("evaluation point has too few coordinates");
                    t *= pow_rat(u[static_cast<size_t>(v)], e);
                }
            }
            total += t;
        }
        return total;
    }

    // Canonical text form, terms in lattice order:
    //   COEFF * e[eps1]^(p/q) e[a1]^(p/q) ...
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first_term = true;
        for (const auto& [k, c] : terms_) {
            if (!first_term) os << " + ";
            first_term = false;
            os << c.get_str();
            for (int v = 0; v < ExpKey::kMaxVars; ++v) {
                int e = k[v];
                if (e == 0) continue;
                int num = e, den = 4;
                int g = std::gcd(std::abs(num), den);
                num /= g;
                den /= g;
                os << " * e[" << var_name(v) << "]^(" << num;
                if (den != 1) os << "/" << den;
                os << ")";
            }
        }
        return os.str();
    }

    friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.terms_ == b.terms_; }

    static ExpPoly from_map(const std::unordered_map<ExpKey, Rat, ExpKeyHash>& acc) {
        ExpPoly r;
        r.terms_.reserve(acc.size());
        for (const auto& [k, c] : acc)
            if (!kinst::is_zero(c)) r.terms_.emplace_back(k, c);
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        return r;
    }

    // Internal: assumes sorted unique nonzero terms.
    static ExpPoly from_sorted(std::vector<Term> terms) {
        ExpPoly r;
        r.terms_ = std::move(terms);
        return r;
    }

    size_t hash() const {
        size_t h = terms_.size();
        ExpKeyHash kh;
        for (const auto& [k, c] : terms_) {
            h = h * 1099511628211ULL + kh(k);
            h = h * 1099511628211ULL + std::hash<std::string>{}(c.get_str());
        }
        return h;
    }

  private:
    std::vector<Term> terms_;
};

// A linear endomorphism of the exponent basis with quarter-rational entries:
// var_i  ->  sum_j  m[i][j] · var_j.  Exponents transform accordingly; the
// image must land back on the quarter lattice.
struct LinearMap {
    // m[i][j]: coefficient of var_j in the image of var_i
    std::array<std::array<Rat, ExpKey::kMaxVars>, ExpKey::kMaxVars> m{};

    static LinearMap identity() {
        LinearMap s;
        for (int i = 0; i < ExpKey::kMaxVars; ++i) s.m[i][i] = 1;
        return s;
    }

    ExpKey apply(const ExpKey& k) const {
        std::array<Rat, ExpKey::kMaxVars> out{};
        for (int i = 0; i < ExpKey::kMaxVars; ++i) {
            int e = k[i];
            if (e == 0) continue;
            for (int j = 0; j < ExpKey::kMaxVars; ++j) {
                if (m[i][j] != 0) out[static_cast<size_t>(j)] += m[i][j] * e;
            }
        }
        ExpKey r;
        for (int j = 0; j < ExpKey::kMaxVars; ++j) {
            Rat q = out[static_cast<size_t>(j)];
            if (q.get_den() != 1)
                throw LatticeOverflow("linear substitution leaves the quarter lattice");
            if (!q.get_num().fits_slong_p())
                throw LatticeOverflow("linear substitution exponent overflow");
            r.set(j, q.get_num().get_si());
        }
        return r;
    }
};

inline ExpPoly substitute_linear(const ExpPoly& p, const LinearMap& s) {
    std::unordered_map<ExpKey, Rat, ExpKeyHash> acc;
    for (const auto& [k, c] : p.terms()) acc[s.apply(k)] += c;
    return ExpPoly::from_map(acc);
}

// eps2 -> eps2 - eps1 (plus identity on everything else), and friends.
inline LinearMap shear_eps2_minus_eps1() {
    LinearMap s = LinearMap::identity();
    s.m[kEps2][kEps1] = -1; // eps2 |-> eps2 - eps1
    return s;
}

inline LinearMap shear_eps1_minus_eps2() {
    LinearMap s = LinearMap::identity();
    s.m[kEps1][kEps2] = -1;
    return s;
}

inline LinearMap swap_eps() {
    LinearMap s = LinearMap::identity();
    s.m[kEps1][kEps1] = 0;
    s.m[kEps1][kEps2] = 1;
    s.m[kEps2][kEps2] = 0;
    s.m[kEps2][kEps1] = 1;
    return s;
}

// a_alpha -> a_alpha + c_alpha · eps_i  (the blow-up patch shift a + eps·k).
inline LinearMap shift_a_by_eps(int eps_var, const std::vector<long>& coeff) {
    LinearMap s = LinearMap::identity();
    for (size_t alpha = 0; alpha < coeff.size(); ++alpha)
        s.m[a_var(static_cast<int>(alpha) + 1)][eps_var] = Rat(coeff[alpha]);
    return s;
}

// eps2 -> c · eps1 specialization.
inline LinearMap specialize_eps2(const Rat& c) {
    LinearMap s = LinearMap::identity();
    s.m[kEps2][kEps2] = 0;
    s.m[kEps2][kEps1] = c;
    return s;
}

} // namespace kinst
