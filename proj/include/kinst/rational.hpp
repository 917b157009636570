#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace kinst {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

inline Int binom(long n, long k) {
    if (k < 0 || k > n) return Int(0);
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return b;
}

// Generalized binomial coefficient n(n-1)...(n-k+1)/k!, any integer n.
inline Rat binom_gen(long n, long k) {
    if (k < 0) return Rat(0);
    Rat acc(1);
    for (long t = 0; t < k; ++t) {
        Rat f(n - t, t + 1);
        f.canonicalize();
        acc *= f;
    }
    return acc;
}

inline Int factorial(long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

// q^e for integer e (e < 0 inverts; q must be nonzero then).
inline Rat pow_rat(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    Rat base = e > 0 ? q : Rat(1) / q;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rat acc(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

} // namespace kinst
