#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace omegahat {

/// Exact rational number. Always kept in canonical form by gmpxx.
using Rational = mpq_class;

/// Base error for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stage index of an approximant stream (n >= 1).
using Stage = std::uint32_t;

/// A finite binary string identified with its positive integer code
/// (lambda -> 1, "0" -> 2, "1" -> 3, "00" -> 4, ...).
using Index = std::uint64_t;

Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; the denominator is always printed.
std::string format_rational(const Rational& q);

/// 2^e for any signed exponent.
Rational pow2(long e);

/// Largest dyadic k/2^bits not exceeding q.
Rational floor_dyadic(const Rational& q, unsigned bits);

/// Smallest dyadic k/2^bits not below q.
Rational ceil_dyadic(const Rational& q, unsigned bits);

/// Smallest b with 2^-b <= q (q > 0).
unsigned bits_for(const Rational& q);

/// Rational upper bound for sqrt(q) (q >= 0), accurate to about 2^-bits.
Rational sqrt_upper(const Rational& q, unsigned bits);

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace omegahat
