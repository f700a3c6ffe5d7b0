#pragma once

#include "omegahat/complex_rational.hpp"
#include "omegahat/state_vector.hpp"

#include <vector>

namespace omegahat::linalg {

/// Closed interval [lo, hi] with rational endpoints, lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h);
  static Interval point(const Rational& q) { return {q, q}; }

  Rational width() const { return Rational(hi - lo); }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  Interval& operator+=(const Interval& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return {Rational(a.lo - b.hi), Rational(a.hi - b.lo)};
  }
  friend Interval operator*(const Rational& c, const Interval& a);
  /// [lo - r, hi + r] for r >= 0.
  Interval widened(const Rational& r) const { return {Rational(lo - r), Rational(hi + r)}; }
  /// Endpoints rounded outward to the dyadic grid 2^-bits.
  Interval rounded_out(unsigned bits) const;
};

/// Real and imaginary parts enclosed separately.
struct ComplexInterval {
  Interval re;
  Interval im;
  Rational width() const { return std::max(re.width(), im.width()); }
  bool contains(const RationalComplex& z) const { return re.contains(z.re) && im.contains(z.im); }
};

/// Entrywise enclosure of a block (+) tail-scalar Hermitian operator.
/// entry(i, j) and entry(j, i) are kept conjugate-symmetric.
class IntervalHermitian {
 public:
  IntervalHermitian(std::size_t dim, Interval tail);

  std::size_t dim() const { return dim_; }
  const ComplexInterval& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  const Interval& tail() const { return tail_; }
  /// Sets (i, j) and mirrors the conjugate into (j, i); diagonal imaginary
  /// parts are forced to the point 0.
  void set(std::size_t i, std::size_t j, const ComplexInterval& z);

  Rational max_width() const;
  /// True if every entry of `a` (padded to this size) lies in its interval.
  bool contains(const BlockScalarOperator& a) const;

 private:
  std::size_t dim_;
  std::vector<ComplexInterval> data_;
  Interval tail_;
};

/// Entry (i, j) of any size: the tail on the new diagonal, 0 elsewhere.
ComplexInterval entry(const IntervalHermitian& h, std::size_t i, std::size_t j);
/// Entrywise sum and difference, padding the smaller operand.
IntervalHermitian add(const IntervalHermitian& a, const IntervalHermitian& b);
IntervalHermitian subtract(const IntervalHermitian& a, const IntervalHermitian& b);

/// Enclosure of { <T x, x> : T a Hermitian selection of `h` }.
Interval quad_form(const IntervalHermitian& h, const StateVector& x);

}  // namespace omegahat::linalg
