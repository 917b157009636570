#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kinst/errors.hpp"
#include "kinst/rational.hpp"

namespace kinst {

// Descriptor of a truncated graded ring Q[g_0, g_1, ...] with each generator
// nilpotent at its declared order and an optional total weighted-degree cap.
// Q[h]/(h^r) is the one-generator case with nilpotency r.
struct TruncRingDesc {
    std::vector<int> nilpotency; // g_v^{nilpotency[v]} = 0
    std::vector<int> degree;     // grading weight per generator (default 1)
    int total_cap = -1;          // drop monomials of weighted degree > cap

    int nvars() const { return static_cast<int>(nilpotency.size()); }
};

using TruncRingPtr = std::shared_ptr<const TruncRingDesc>;

inline TruncRingPtr projective_ring(int r) {
    auto d = std::make_shared<TruncRingDesc>();
    d->nilpotency = {r};
    d->degree = {1};
    return d;
}

inline TruncRingPtr make_ring(std::vector<int> nilpotency, std::vector<int> degree = {},
                              int total_cap = -1) {
    auto d = std::make_shared<TruncRingDesc>();
    d->nilpotency = std::move(nilpotency);
    if (degree.empty()) degree.assign(d->nilpotency.size(), 1);
    d->degree = std::move(degree);
    d->total_cap = total_cap;
    return d;
}

// Element of a truncated graded ring.
class RElem {
  public:
    RElem() = default;
    explicit RElem(TruncRingPtr ring) : ring_(std::move(ring)) {}
    RElem(TruncRingPtr ring, const Rat& c) : ring_(std::move(ring)) {
        if (!kinst::is_zero(c)) terms_[std::vector<int>(vars(), 0)] = c;
    }

    static RElem generator(const TruncRingPtr& ring, int v, int power = 1) {
        RElem e(ring);
        std::vector<int> mono(static_cast<size_t>(ring->nvars()), 0);
        mono[static_cast<size_t>(v)] = power;
        if (e.keep(mono)) e.terms_[mono] = 1;
        return e;
    }

    const TruncRingPtr& ring() const { return ring_; }
    bool is_zero() const { return terms_.empty(); }

    Rat constant_term() const {
        auto it = terms_.find(std::vector<int>(vars(), 0));
        return it == terms_.end() ? Rat(0) : it->second;
    }

    bool is_unit() const { return !kinst::is_zero(constant_term()); }

    // Coefficient of a monomial given as exponents per generator.
    Rat coeff(const std::vector<int>& mono) const {
        auto it = terms_.find(mono);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    RElem operator-() const {
        RElem r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend RElem operator+(const RElem& a, const RElem& b) {
        RElem r = a.ring_ ? RElem(a.ring_) : RElem(b.ring_);
        r.terms_ = a.terms_;
        for (const auto& [m, c] : b.terms_) {
            auto it = r.terms_.find(m);
            if (it == r.terms_.end()) {
                r.terms_.emplace(m, c);
            } else {
                it->second += c;
                if (kinst::is_zero(it->second)) r.terms_.erase(it);
            }
        }
        return r;
    }

    friend RElem operator-(const RElem& a, const RElem& b) { return a + (-b); }

    friend RElem operator*(const RElem& a, const RElem& b) {
        RElem r = a.ring_ ? RElem(a.ring_) : RElem(b.ring_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                std::vector<int> m(ma.size());
                for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                if (!r.keep(m)) continue;
                auto it = r.terms_.find(m);
                if (it == r.terms_.end()) {
                    r.terms_.emplace(std::move(m), ca * cb);
                } else {
                    it->second += ca * cb;
                    if (kinst::is_zero(it->second)) r.terms_.erase(it);
                }
            }
        }
        return r;
    }

    RElem operator*(const Rat& c) const {
        if (kinst::is_zero(c)) return ring_ ? RElem(ring_) : RElem();
        RElem r(*this);
        for (auto& [m, x] : r.terms_) x *= c;
        return r;
    }

    // Nilpotent part (everything above degree zero).
    RElem nil_part() const {
        RElem r(*this);
        r.terms_.erase(std::vector<int>(vars(), 0));
        return r;
    }

    // Inverse of a unit: 1/(c + n) = (1/c) sum (-n/c)^j, finite by nilpotency.
    RElem inverse() const {
        Rat c = constant_term();
        if (kinst::is_zero(c)) throw NonInvertible("ring element with zero constant term");
        RElem n = nil_part() * (Rat(-1) / c);
        RElem acc(ring_, Rat(1));
        RElem pw(ring_, Rat(1));
        while (true) {
            pw = pw * n;
            if (pw.is_zero()) break;
            acc = acc + pw;
        }
        return acc * (Rat(1) / c);
    }

    RElem pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        RElem acc(ring_, Rat(1));
        RElem base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.get_str();
            for (size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                os << "*g" << v;
                if (m[v] != 1) os << "^" << m[v];
            }
        }
        return os.str();
    }

    friend bool operator==(const RElem& a, const RElem& b) { return a.terms_ == b.terms_; }

  private:
    size_t vars() const { return ring_ ? static_cast<size_t>(ring_->nvars()) : 0; }

    bool keep(const std::vector<int>& mono) const {
        int total = 0;
        for (size_t v = 0; v < mono.size(); ++v) {
            if (mono[v] >= ring_->nilpotency[v]) return false;
            total += mono[v] * ring_->degree[v];
        }
        return ring_->total_cap < 0 || total <= ring_->total_cap;
    }

    TruncRingPtr ring_;
    std::map<std::vector<int>, Rat> terms_;
};

} // namespace kinst
