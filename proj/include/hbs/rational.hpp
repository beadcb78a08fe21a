#pragma once

#include <gmpxx.h>

#include <string>

#include "hbs/int_math.hpp"

namespace hbs {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(Index num, Index den) {
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

inline Rational rational_from_index(Index v) { return Rational(static_cast<long>(v)); }

/// Largest integer <= q.
inline Index rational_floor(const Rational& q) {
    BigInt z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!z.fits_slong_p())
        throw config_error("rational_floor: value out of index range");
    return static_cast<Index>(z.get_si());
}

/// Smallest integer >= q.
inline Index rational_ceil(const Rational& q) {
    BigInt z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!z.fits_slong_p())
        throw config_error("rational_ceil: value out of index range");
    return static_cast<Index>(z.get_si());
}

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// q^e for e >= 0.
inline Rational rational_pow(const Rational& q, unsigned e) {
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
    return Rational(num) / Rational(den);
}

inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

} // namespace hbs
