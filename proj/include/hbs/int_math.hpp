#pragma once

#include <cstdint>

#include "hbs/errors.hpp"

namespace hbs {

using Index = std::int64_t;

inline Index checked_add(Index a, Index b) {
    Index r;
    if (__builtin_add_overflow(a, b, &r))
        throw config_error("integer overflow in index addition");
    return r;
}

inline Index checked_sub(Index a, Index b) {
    Index r;
    if (__builtin_sub_overflow(a, b, &r))
        throw config_error("integer overflow in index subtraction");
    return r;
}

inline Index checked_mul(Index a, Index b) {
    Index r;
    if (__builtin_mul_overflow(a, b, &r))
        throw config_error("integer overflow in index multiplication");
    return r;
}

inline Index checked_pow(Index base, int exp) {
    if (exp < 0)
        throw contract_error("checked_pow: negative exponent");
    Index r = 1;
    for (int i = 0; i < exp; ++i)
        r = checked_mul(r, base);
    return r;
}

/// Floor division with mathematically correct behavior for negative
/// numerators. Divisor must be positive.
inline Index floor_div(Index a, Index b) {
    Index q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace hbs
