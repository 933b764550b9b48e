#pragma once

#include <gmpxx.h>

#include <string>

#include "steiner/errors.hpp"

namespace steiner {

/// Exact rational scalar.  All graph costs, LP coefficients and LP solutions
/// are values of this type; there is no floating-point path anywhere.
using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Formats a canonical rational as "p" or "p/q".
inline std::string rat_str(const Rat& r) {
    return r.get_str();
}

/// Parses "p" or "p/q" with an optional sign.  Throws UsageError on garbage.
inline Rat rat_parse(const std::string& text) {
    Rat r;
    if (text.empty() || r.set_str(text, 10) != 0)
        throw UsageError("malformed rational '" + text + "'");
    if (r.get_den() == 0) throw UsageError("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

inline int rat_sign(const Rat& r) { return sgn(r); }

/// True iff q divides some power of ten, i.e. the value has a finite decimal
/// expansion (used to flag lossy LP dumps).
inline bool has_finite_decimal(const Rat& r) {
    mpz_class den = r.get_den();
    for (int p : {2, 5})
        while (den % p == 0) den /= p;
    return den == 1;
}

/// Decimal rendering; exact when has_finite_decimal, otherwise truncated to
/// `digits` fractional digits.
inline std::string rat_decimal(const Rat& r, int digits = 12) {
    mpz_class num = r.get_num(), den = r.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    mpz_class ip = num / den, rem = num % den;
    std::string out = (neg ? "-" : "") + ip.get_str();
    if (rem == 0) return out;
    out += '.';
    for (int i = 0; i < digits && rem != 0; ++i) {
        rem *= 10;
        mpz_class d = rem / den;
        rem %= den;
        out += static_cast<char>('0' + d.get_si());
    }
    return out;
}

} // namespace steiner
