#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace voatrace {

// Exact arithmetic types. All series coefficients and exponents in this
// library are mpq rationals; no floating point is used outside numeric
// evaluation helpers.
//
// Careful: mpq_class(n, d) does NOT canonicalize, and GMP arithmetic assumes
// canonical operands.  Construct from numerator/denominator through rat().
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// Parses a fraction string "p", "-p" or "p/q". Decimal notation is rejected.
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (s.find('.') != std::string::npos)
        throw std::invalid_argument("decimal notation not accepted: " + s);
    mpq_class v;
    if (v.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (v.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + s);
    v.canonicalize();
    return v;
}

inline std::string rat_str(const Rational& r) { return r.get_str(); }

inline bool rat_is_integer(const Rational& r) { return r.get_den() == 1; }

inline long rat_to_long(const Rational& r) {
    if (!rat_is_integer(r)) throw std::domain_error("not an integer: " + rat_str(r));
    if (!r.get_num().fits_slong_p()) throw std::domain_error("integer out of range");
    return r.get_num().get_si();
}

inline Integer factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

// Binomial coefficient with arbitrary integer top, nonnegative bottom:
// C(t, r) = t(t-1)...(t-r+1)/r!, so C(-3, 2) = 6 and C(1, 3) = 0.
inline Integer binom(long t, long r) {
    if (r < 0) return 0;
    Integer num = 1;
    for (long i = 0; i < r; ++i) num *= Integer(t - i);
    Integer den = factorial(r);
    Integer q;
    mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

inline Rational rat_pow(const Rational& base, long e) {
    if (e == 0) return 1;
    if (base == 0 && e < 0) throw std::domain_error("zero to negative power");
    Rational b = e < 0 ? Rational(1 / base) : base;
    long n = e < 0 ? -e : e;
    Rational acc = 1;
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    acc.canonicalize();
    return acc;
}

inline Rational rat_floor(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return Rational(q);
}

}  // namespace voatrace
