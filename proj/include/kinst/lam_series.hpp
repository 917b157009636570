#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kinst/factored.hpp"

namespace kinst {

// One Casimir insertion variable: tau_p or t_p, p a nonzero Adams index.
struct InsVar {
    bool is_t = false;
    int p = 0;

    friend bool operator==(const InsVar& a, const InsVar& b) {
        return a.is_t == b.is_t && a.p == b.p;
    }
    friend bool operator<(const InsVar& a, const InsVar& b) {
        if (a.is_t != b.is_t) return a.is_t < b.is_t;
        return a.p < b.p;
    }

    std::string str() const {
        return (is_t ? "t[" : "tau[") + std::to_string(p) + "]";
    }
};

// Monomial in the insertion variables, canonical sorted form.
struct InsMono {
    std::vector<std::pair<InsVar, int>> factors; // sorted, powers >= 1

    static InsMono unit() { return {}; }
    static InsMono var(const InsVar& v) { return {{{v, 1}}}; }

    int degree() const {
        int d = 0;
        for (const auto& [v, e] : factors) d += e;
        return d;
    }

    InsMono operator*(const InsMono& o) const {
        InsMono r;
        auto ia = factors.begin();
        auto ib = o.factors.begin();
        while (ia != factors.end() || ib != o.factors.end()) {
            if (ib == o.factors.end() || (ia != factors.end() && ia->first < ib->first))
                r.factors.push_back(*ia++);
            else if (ia == factors.end() || ib->first < ia->first)
                r.factors.push_back(*ib++);
            else {
                r.factors.emplace_back(ia->first, ia->second + ib->second);
                ++ia, ++ib;
            }
        }
        return r;
    }

    friend bool operator==(const InsMono& a, const InsMono& b) { return a.factors == b.factors; }
    friend bool operator<(const InsMono& a, const InsMono& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.factors < b.factors;
    }

    std::string str() const {
        if (factors.empty()) return "1";
        std::string s;
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) s += " ";
            s += factors[i].first.str();
            if (factors[i].second > 1) s += "^" + std::to_string(factors[i].second);
        }
        return s;
    }
};

// Truncated power series in Lambda (integer exponents <= cap) with factored
// fraction coefficients, graded by monomials in the insertion variables up
// to a configured total degree.
class LamSeries {
  public:
    int lambda_cap = 0; // keep Lambda^n with n <= lambda_cap
    int ins_cap = 1;    // keep insertion monomials of total degree <= ins_cap
    std::map<int, std::map<InsMono, FracV>> c;

    LamSeries() = default;
    LamSeries(int lcap, int icap) : lambda_cap(lcap), ins_cap(icap) {}

    static LamSeries one(int lcap, int icap) {
        LamSeries s(lcap, icap);
        s.set(0, InsMono::unit(), FracV::one());
        return s;
    }

    void set(int n, const InsMono& g, FracV v) {
        if (n > lambda_cap || g.degree() > ins_cap) return;
        if (v.is_zero()) {
            auto it = c.find(n);
            if (it != c.end()) {
                it->second.erase(g);
                if (it->second.empty()) c.erase(it);
            }
            return;
        }
        c[n][g] = std::move(v);
    }

    void accumulate(int n, const InsMono& g, const FracV& v) {
        if (n > lambda_cap || g.degree() > ins_cap || v.is_zero()) return;
        auto& slot = c[n][g];
        slot = slot + v;
        if (slot.is_zero()) {
            c[n].erase(g);
            if (c[n].empty()) c.erase(n);
        }
    }

    FracV coeff(int n, const InsMono& g = InsMono::unit()) const {
        auto it = c.find(n);
        if (it == c.end()) return FracV::zero();
        auto jt = it->second.find(g);
        return jt == it->second.end() ? FracV::zero() : jt->second;
    }

    // Coefficient of Lambda^n at the plain (tau = t = 0) grade.
    FracV plain(int n) const { return coeff(n, InsMono::unit()); }

    LamSeries operator+(const LamSeries& o) const {
        LamSeries r(*this);
        for (const auto& [n, grades] : o.c)
            for (const auto& [g, v] : grades) r.accumulate(n, g, v);
        return r;
    }

    LamSeries operator-(const LamSeries& o) const {
        LamSeries r(*this);
        for (const auto& [n, grades] : o.c)
            for (const auto& [g, v] : grades) r.accumulate(n, g, -v);
        return r;
    }

    LamSeries operator*(const LamSeries& o) const {
        LamSeries r(std::min(lambda_cap, o.lambda_cap), std::min(ins_cap, o.ins_cap));
        for (const auto& [n1, g1s] : c) {
            if (n1 > r.lambda_cap) continue;
            for (const auto& [n2, g2s] : o.c) {
                if (n1 + n2 > r.lambda_cap) break;
                for (const auto& [g1, v1] : g1s) {
                    for (const auto& [g2, v2] : g2s) {
                        InsMono g = g1 * g2;
                        if (g.degree() > r.ins_cap) continue;
                        r.accumulate(n1 + n2, g, v1 * v2);
                    }
                }
            }
        }
        return r;
    }

    LamSeries scaled(const FracV& f) const {
        LamSeries r(lambda_cap, ins_cap);
        for (const auto& [n, grades] : c)
            for (const auto& [g, v] : grades) r.set(n, g, v * f);
        return r;
    }

    // Multiplies the Lambda^n slice by mono^n (the Lambda -> Lambda·e^{w}
    // rescaling of the blow-up patches).
    LamSeries lambda_rescaled(const ExpKey& mono_per_power) const {
        LamSeries r(lambda_cap, ins_cap);
        for (const auto& [n, grades] : c) {
            FracV m = FracV::monomial(mono_per_power.scaled(n));
            for (const auto& [g, v] : grades) r.set(n, g, v * m);
        }
        return r;
    }

    LamSeries mapped(const LinearMap& s) const {
        LamSeries r(lambda_cap, ins_cap);
        for (const auto& [n, grades] : c)
            for (const auto& [g, v] : grades) r.set(n, g, substitute_linear(v, s));
        return r;
    }

    // Series division.  The divisor must live in the plain (unit) insertion
    // grade with an invertible Lambda^0 coefficient; that is the only shape
    // the pipeline divides by.
    LamSeries operator/(const LamSeries& o) const {
        for (const auto& [n, grades] : o.c)
            for (const auto& [g, v] : grades)
                if (g.degree() != 0)
                    throw Error("series division by an insertion-graded divisor");
        FracV lead = o.coeff(0, InsMono::unit());
        if (lead.is_zero()) throw DivisionByZero();
        FracV lead_inv = lead.inverse();
        LamSeries q(std::min(lambda_cap, o.lambda_cap), std::min(ins_cap, o.ins_cap));
        for (int n = 0; n <= q.lambda_cap; ++n) {
            std::map<InsMono, FracV> want;
            {
                auto it = c.find(n);
                if (it != c.end())
                    for (const auto& [g, v] : it->second)
                        if (g.degree() <= q.ins_cap) want[g] = v;
            }
            // subtract sum_{m < n} q[m][g] * o[n-m]
            for (const auto& [m, qgrades] : q.c) {
                if (m >= n) break;
                auto it = o.c.find(n - m);
                if (it == o.c.end()) continue;
                const FracV& ov = it->second.begin()->second;
                for (const auto& [g, qv] : qgrades) {
                    auto jt = want.find(g);
                    if (jt == want.end())
                        want[g] = -(qv * ov);
                    else
                        jt->second = jt->second - qv * ov;
                }
            }
            for (auto& [g, v] : want)
                if (!v.is_zero()) q.set(n, g, v * lead_inv);
        }
        return q;
    }

    std::string str() const {
        std::ostringstream os;
        for (const auto& [n, grades] : c)
            for (const auto& [g, v] : grades) {
                RatFrac f = v.to_rat_frac();
                os << "L=" << n << " G=" << g.str() << " N=" << f.num.str()
                   << " D=" << f.den.str() << "\n";
            }
        return os.str();
    }
};

} // namespace kinst
