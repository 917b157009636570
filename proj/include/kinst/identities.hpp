#pragma once

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kinst/blowup.hpp"
#include "kinst/eps_series.hpp"

namespace kinst {

struct CheckReport {
    struct PerOrder {
        int lambda = 0;
        bool holds = false;
        std::string witness; // cross-multiplied nonzero numerator on failure
        double seconds = 0.0;
    };
    std::string identity;
    std::string params;
    std::vector<PerOrder> orders;
    std::string note;

    bool all_hold() const {
        for (const auto& o : orders)
            if (!o.holds) return false;
        return true;
    }

    std::string table() const {
        std::ostringstream os;
        os << identity << " " << params << "\n";
        for (const auto& o : orders) {
            os << "  Lambda^" << o.lambda << "  " << (o.holds ? "holds" : "FAILS");
            if (!o.holds) os << "  witness: " << o.witness;
            os << "\n";
        }
        if (!note.empty()) os << "  " << note << "\n";
        return os.str();
    }

    std::string machine() const {
        std::ostringstream os;
        for (const auto& o : orders) {
            os << "CHECK id=" << identity << " params=" << params << " L=" << o.lambda
               << " verdict=" << (o.holds ? "holds" : "fails");
            if (!o.holds) os << " witness=" << o.witness;
            os << "\n";
        }
        return os.str();
    }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string short_witness(const FracV& diff) {
    RatFrac f = diff.to_rat_frac();
    std::string s = f.num.str();
    if (s.size() > 160) s = s.substr(0, 157) + "...";
    return s;
}

} // namespace detail

// Blow-up equation: Zhat^inst_{l,0,d} = Z^inst_l coefficientwise.
inline CheckReport check_blowup_eq(int r, long l, int d, int lambda_cap) {
    if (l < 0 || l > r) throw RangeViolation("check_blowup_eq needs 0 <= l <= r");
    if (d < 0 || d > r) throw RangeViolation("check_blowup_eq needs 0 <= d <= r");
    CheckReport rep;
    rep.identity = "blowup-eq";
    rep.params = "r=" + std::to_string(r) + " l=" + std::to_string(l) + " d=" + std::to_string(d) +
                 " N=" + std::to_string(lambda_cap);
    InsertionSpec spec;
    spec.cs_level = l;
    LamSeries z = z_inst(r, spec, lambda_cap, 0);
    LamSeries zh = zhat_inst(r, l, 0, d, lambda_cap, spec, 0);
    for (int n = 0; n <= lambda_cap; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        FracV diff = zh.plain(n) - z.plain(n);
        CheckReport::PerOrder o;
        o.lambda = n;
        o.holds = diff.is_zero();
        if (!o.holds) o.witness = detail::short_witness(diff);
        o.seconds = detail::seconds_since(t0);
        rep.orders.push_back(std::move(o));
    }
    return rep;
}

// Vanishing of the t_p grade of Zhat^inst_{l,0,d} in the admissible range.
inline CheckReport check_vanish_t(int r, long l, int d, int p, int lambda_cap) {
    if (p == 0) throw RangeViolation("p must be nonzero");
    bool in_range = p > 0 ? (0 <= d && d <= r - p) : (-p <= d && d <= r);
    if (!in_range) throw RangeViolation("(d,p) outside the vanishing range");
    CheckReport rep;
    rep.identity = "vanish-t";
    rep.params = "r=" + std::to_string(r) + " l=" + std::to_string(l) + " d=" + std::to_string(d) +
                 " p=" + std::to_string(p) + " N=" + std::to_string(lambda_cap);
    InsertionSpec spec;
    spec.cs_level = l;
    spec.tau_orders = {p};
    LamSeries zh = zhat_inst(r, l, 0, d, lambda_cap, spec, 1);
    InsMono tp = InsMono::var(InsVar{true, p});
    for (int n = 0; n <= lambda_cap; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        FracV v = zh.coeff(n, tp);
        CheckReport::PerOrder o;
        o.lambda = n;
        o.holds = v.is_zero();
        if (!o.holds) o.witness = detail::short_witness(v);
        o.seconds = detail::seconds_since(t0);
        rep.orders.push_back(std::move(o));
    }
    return rep;
}

// k != 0 vanishing: exactly one of the signs +|k|, -|k| gives an identically
// zero series; the report records which.
inline CheckReport check_vanish_k(int r, long l, int d, long k, int lambda_cap) {
    if (k == 0 || std::abs(k) >= r) throw RangeViolation("check_vanish_k needs 0 < |k| < r");
    CheckReport rep;
    rep.identity = "vanish-k";
    rep.params = "r=" + std::to_string(r) + " l=" + std::to_string(l) + " d=" + std::to_string(d) +
                 " k=+-" + std::to_string(std::labs(k)) + " N=" + std::to_string(lambda_cap);
    InsertionSpec spec;
    spec.cs_level = l;
    LamSeries plus = zhat_inst(r, l, std::labs(k), d, lambda_cap, spec, 0);
    LamSeries minus = zhat_inst(r, l, -std::labs(k), d, lambda_cap, spec, 0);
    bool plus_zero = true, minus_zero = true;
    std::string witness;
    for (int n = 0; n <= lambda_cap; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        FracV vp = plus.plain(n);
        FracV vm = minus.plain(n);
        if (!vp.is_zero()) plus_zero = false;
        if (!vm.is_zero()) minus_zero = false;
        CheckReport::PerOrder o;
        o.lambda = n;
        o.holds = vp.is_zero() || vm.is_zero();
        if (!o.holds) o.witness = detail::short_witness(vp);
        o.seconds = detail::seconds_since(t0);
        rep.orders.push_back(std::move(o));
    }
    // The convention sign is the one whose series vanishes.  At l = 0 sheaf
    // duality (a -> -a, k -> -k, d fixed) makes the two signs vanish
    // together; for l >= 1 it flips the level out of range and the vanishing
    // is one-sided.
    if (!plus_zero && !minus_zero) {
        rep.note = "neither sign vanishes";
        for (auto& o : rep.orders) o.holds = false;
    } else if (plus_zero && minus_zero) {
        rep.note = "both signs vanish (self-dual level)";
    } else {
        rep.note = std::string("vanishing sign: k=") + (minus_zero ? "-" : "+") +
                   std::to_string(std::labs(k));
    }
    return rep;
}

// Z^inst_l(eps1,-2eps1,a) = Z^inst_l(2eps1,-eps1,a), valid for l != r.
inline CheckReport check_sym(int r, long l, int lambda_cap) {
    if (l == r) throw RangeViolation("the specialization symmetry requires l != r");
    CheckReport rep;
    rep.identity = "sym";
    rep.params = "r=" + std::to_string(r) + " l=" + std::to_string(l) +
                 " N=" + std::to_string(lambda_cap);
    InsertionSpec spec;
    spec.cs_level = l;
    LamSeries z = z_inst(r, spec, lambda_cap, 0);
    LinearMap left = specialize_eps2(Rat(-2)); // (eps1, -2 eps1)
    LinearMap right;                           // (2 eps1, -eps1)
    right = LinearMap::identity();
    right.m[kEps1][kEps1] = 2;
    right.m[kEps2][kEps1] = -1;
    right.m[kEps2][kEps2] = 0;
    for (int n = 0; n <= lambda_cap; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        FracV a = substitute_linear(z.plain(n), left);
        FracV b = substitute_linear(z.plain(n), right);
        FracV diff = a - b;
        CheckReport::PerOrder o;
        o.lambda = n;
        o.holds = diff.is_zero();
        if (!o.holds) o.witness = detail::short_witness(diff);
        o.seconds = detail::seconds_since(t0);
        rep.orders.push_back(std::move(o));
    }
    return rep;
}

// Order-N blow-up relations at two admissible d values, solved as a 2x2
// linear system for the pair of patch evaluations
//   X = Z_N(eps1, eps2-eps1, a),  Y = Z_N(eps1-eps2, eps2, a);
// the k != 0 sectors and all lower orders enter as knowns.  Z_N is recovered
// from X by the inverse shear and checked against the direct fixed-point sum.
struct SolveResult {
    LamSeries recovered; // plain series of recovered coefficients
    bool matches_direct = true;
};

inline SolveResult solve_recursive(int r, long l, int d1, int d2, int lambda_cap) {
    if (d1 < 0 || d1 > r || d2 < 0 || d2 > r || d1 == d2)
        throw RangeViolation("solve_recursive needs distinct d1, d2 in [0, r]");

    InsertionSpec spec;
    spec.cs_level = l;
    LamSeries z = z_inst(r, spec, lambda_cap, 0);

    SolveResult res;
    res.recovered = LamSeries(lambda_cap, 0);
    res.recovered.set(0, InsMono::unit(), FracV::one());

    std::vector<long> zero_k(static_cast<size_t>(r), 0);
    auto kvecs = enumerate_kvecs(r, 0, lambda_cap);

    LinearMap unshear = LinearMap::identity();
    unshear.m[kEps2][kEps1] = 1; // eps2 -> eps2 + eps1, inverse of patch 1

    for (int N = 1; 2 * r * N <= lambda_cap; ++N) {
        int order = 2 * r * N;
        // knowns K_d: every (k, n1, n2) contribution at this order except the
        // two extreme splits of the k = 0 sector
        auto known_part = [&](int d) {
            LamSeries p1 = patch_substitution(z, 1, zero_k, r, d, l);
            LamSeries p2 = patch_substitution(z, 2, zero_k, r, d, l);
            FracV acc = FracV::zero();
            for (const auto& kv : kvecs) {
                long norm = 0;
                for (long v : kv) norm += v * v;
                int lam_off = static_cast<int>(r * norm);
                if (lam_off > order) continue;
                int inner = order - lam_off;
                bool zero_sector = (norm == 0);
                FracV weight = sector_weight(r, l, d, kv);
                LamSeries q1 = zero_sector ? p1 : p1.mapped(shift_a_by_eps(kEps1, kv));
                LamSeries q2 = zero_sector ? p2 : p2.mapped(shift_a_by_eps(kEps2, kv));
                for (int n1 = 0; n1 <= inner; n1 += 1) {
                    int n2 = inner - n1;
                    if (zero_sector && (n1 == inner || n2 == inner) && inner == order) continue;
                    FracV a1 = q1.plain(n1);
                    FracV a2 = q2.plain(n2);
                    if (a1.is_zero() || a2.is_zero()) continue;
                    acc = acc + weight * (a1 * a2);
                }
            }
            return acc;
        };

        FracV zn = z.plain(order); // the directly computed LHS coefficient
        FracV k1 = known_part(d1);
        FracV k2 = known_part(d2);

        auto coef = [&](int d, int eps) {
            // e^{N (d-(r+l)/2) eps}
            ExpKey e;
            e.set(eps, N * 2 * (2 * d - r - static_cast<int>(l)));
            return FracV::monomial(e);
        };
        FracV m11 = coef(d1, kEps1), m12 = coef(d1, kEps2);
        FracV m21 = coef(d2, kEps1), m22 = coef(d2, kEps2);
        FracV det = m11 * m22 - m12 * m21;
        if (det.is_zero()) throw SingularSystem("vanishing determinant in the d-pair system");

        FracV rhs1 = zn - k1, rhs2 = zn - k2;
        FracV x = (rhs1 * m22 - rhs2 * m12) / det;

        FracV recovered = substitute_linear(x, unshear);
        res.recovered.set(order, InsMono::unit(), recovered);
        if (!equal_exact(recovered, zn)) res.matches_direct = false;
    }
    return res;
}

// eps -> 0 limit of eps1 eps2 · (the tau_p coefficient of log Z^inst) per
// Lambda order, along the direction eps2 = c eps1; the value is c times the
// eps1^{-2} Laurent coefficient.
struct LimitSeries {
    std::vector<std::pair<int, FracV>> values; // (Lambda exponent, a-only value)
};

inline FracV eps_limit_scaled(const FracV& coeff, const Rat& c) {
    EpsSeries s = expand_eps_series(coeff, c, -2);
    if (s.lead < -2) throw PoleDetected(-(s.lead + 2));
    return s.at(-2) * c;
}

inline FracV eps_limit_value(const FracV& coeff, const Rat& c) {
    EpsSeries s = expand_eps_series(coeff, c, 0);
    if (s.lead < 0) throw PoleDetected(-s.lead);
    return s.at(0);
}

inline LimitSeries f0_tau_derivative(int r, long l, int p, int lambda_cap,
                                     const std::vector<Rat>& directions = {Rat(-2), Rat(-1, 2),
                                                                           Rat(3)}) {
    InsertionSpec spec;
    spec.cs_level = l;
    spec.tau_orders = {p};
    LamSeries z = z_inst(r, spec, lambda_cap, 1);

    // tau_p grade regraded to a plain series, divided by the plain part
    LamSeries num(lambda_cap, 0), den(lambda_cap, 0);
    InsMono tp = InsMono::var(InsVar{false, p});
    for (int n = 0; n <= lambda_cap; ++n) {
        FracV vn = z.coeff(n, tp);
        if (!vn.is_zero()) num.set(n, InsMono::unit(), vn);
        FracV vd = z.plain(n);
        if (!vd.is_zero()) den.set(n, InsMono::unit(), vd);
    }
    LamSeries dlog = num / den;

    LimitSeries out;
    for (int n = 0; n <= lambda_cap; ++n) {
        FracV coeff = dlog.plain(n);
        if (coeff.is_zero()) continue;
        std::optional<FracV> limit;
        for (const Rat& c : directions) {
            FracV v = eps_limit_scaled(coeff, c);
            if (!limit) {
                limit = v;
            } else if (!equal_exact(*limit, v)) {
                throw Error("eps -> 0 limit depends on the direction (Lambda^" +
                            std::to_string(n) + ")");
            }
        }
        out.values.emplace_back(n, limit ? *limit : FracV::zero());
    }
    return out;
}

// Seiberg-Witten coefficient series:
//   U_p = (-1)^p [ z_inst with the wedge^p origin-class insertion / z_inst ]
// evaluated at eps = 0 order by order.  Valid for 0 < p <= (r-l)/2, with the
// dual form (rank r-p of the dual class) for (r-l)/2 <= p < r.
inline LimitSeries extract_up(int r, long l, int p, int lambda_cap,
                              const std::vector<Rat>& directions = {Rat(-2), Rat(-1, 2), Rat(3)}) {
    if (p <= 0 || p >= r) throw RangeViolation("extract_up needs 0 < p < r");
    bool primary = 2 * p <= r - static_cast<int>(l);
    bool dual_ok = 2 * p >= r - static_cast<int>(l);
    if (!primary && !dual_ok) throw RangeViolation("p outside both insertion ranges");

    InsertionSpec base;
    base.cs_level = l;
    InsertionSpec with_class = base;
    with_class.extra_class = [=](const YoungTuple& Y) {
        ExpPoly cls = origin_class(Y);
        if (primary) return wedge(cls, p);
        return wedge(cls.negate_exponents(), r - p);
    };

    LamSeries num = z_inst(r, with_class, lambda_cap, 0);
    LamSeries den = z_inst(r, base, lambda_cap, 0);
    LamSeries ratio = num / den;

    Rat sign = (p % 2 == 0) ? Rat(1) : Rat(-1);
    LimitSeries out;
    for (int n = 0; n <= lambda_cap; ++n) {
        FracV coeff = ratio.plain(n);
        if (coeff.is_zero()) continue;
        std::optional<FracV> limit;
        for (const Rat& c : directions) {
            FracV v = eps_limit_value(coeff, c);
            if (!limit) {
                limit = v;
            } else if (!equal_exact(*limit, v)) {
                throw Error("U_p limit depends on the direction (Lambda^" + std::to_string(n) +
                            ")");
            }
        }
        out.values.emplace_back(n, (limit ? *limit : FracV::zero()) * sign);
    }
    return out;
}

} // namespace kinst
