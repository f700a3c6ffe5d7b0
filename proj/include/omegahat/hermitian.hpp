#pragma once

#include "omegahat/complex_rational.hpp"

#include <cstddef>
#include <vector>

namespace omegahat::linalg {

/// Dense m x m Hermitian matrix over Q(i), m >= 1.
///
/// Only Hermitian values can be represented: `set` writes the mirrored
/// entry as well, and diagonal entries must be real.
class RationalHermitian {
 public:
  RationalHermitian() : RationalHermitian(1) {}
  explicit RationalHermitian(std::size_t dim);

  /// Builds from full rows; throws Error if the rows are not Hermitian.
  static RationalHermitian from_rows(const std::vector<std::vector<RationalComplex>>& rows);
  static RationalHermitian identity(std::size_t dim);
  static RationalHermitian diagonal(const std::vector<Rational>& diag);

  std::size_t dim() const { return dim_; }
  const RationalComplex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }
  void set(std::size_t i, std::size_t j, const RationalComplex& z);

  bool is_diagonal() const;
  bool is_zero() const;

  /// Copy grown to `dim` (>= current dim) with `fill` on the new diagonal.
  RationalHermitian padded(std::size_t dim, const Rational& fill) const;
  /// Leading principal k x k submatrix.
  RationalHermitian leading(std::size_t k) const;
  /// Principal submatrix on the given (sorted, distinct) indices.
  RationalHermitian principal(const std::vector<std::size_t>& idx) const;

  RationalHermitian& operator*=(const Rational& q);
  RationalHermitian& operator+=(const RationalHermitian& o);  // same dim
  RationalHermitian& operator-=(const RationalHermitian& o);  // same dim

  friend bool operator==(const RationalHermitian& a, const RationalHermitian& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  std::size_t dim_;
  std::vector<RationalComplex> data_;
};

}  // namespace omegahat::linalg
