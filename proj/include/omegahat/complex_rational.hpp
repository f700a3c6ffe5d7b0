#pragma once

#include "omegahat/rational.hpp"

#include <string>

namespace omegahat {

/// a + ib with a, b rational. All operations are exact.
struct RationalComplex {
  Rational re;
  Rational im;

  RationalComplex() = default;
  RationalComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  RationalComplex(long r) : re(r) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  RationalComplex conj() const { return {re, -im}; }
  /// |z|^2, exact.
  Rational norm2() const { return Rational(re * re + im * im); }

  RationalComplex& operator+=(const RationalComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  RationalComplex& operator-=(const RationalComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  RationalComplex& operator*=(const RationalComplex& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  RationalComplex& operator*=(const Rational& q) {
    re *= q;
    im *= q;
    return *this;
  }
  RationalComplex& operator/=(const RationalComplex& o);

  friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
  friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) { return a -= b; }
  friend RationalComplex operator*(RationalComplex a, const RationalComplex& b) { return a *= b; }
  friend RationalComplex operator*(RationalComplex a, const Rational& q) { return a *= q; }
  friend RationalComplex operator*(const Rational& q, RationalComplex a) { return a *= q; }
  friend RationalComplex operator/(RationalComplex a, const RationalComplex& b) { return a /= b; }
  friend RationalComplex operator-(const RationalComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const RationalComplex& a, const RationalComplex& b) { return !(a == b); }
};

std::string format_complex(const RationalComplex& z);

}  // namespace omegahat
