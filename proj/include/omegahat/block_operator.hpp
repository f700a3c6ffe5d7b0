#pragma once

#include "omegahat/hermitian.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace omegahat::linalg {

/// Hermitian operator on the sequence space with basis e_1, e_2, ...:
/// a finite block on e_1..e_m direct-summed with tail * identity on the
/// rest. An m-square operator is the case tail == 0.
class BlockScalarOperator {
 public:
  BlockScalarOperator() = default;  // [0] (+) 0
  BlockScalarOperator(RationalHermitian block, Rational tail)
      : block_(std::move(block)), tail_(std::move(tail)) {}

  static BlockScalarOperator identity() { return {RationalHermitian::identity(1), Rational(1)}; }
  static BlockScalarOperator zero() { return {}; }
  /// scalar * I_m, zero beyond e_m.
  static BlockScalarOperator projector_scalar(std::size_t m, const Rational& scalar);
  static BlockScalarOperator square(RationalHermitian block) { return {std::move(block), Rational(0)}; }

  const RationalHermitian& block() const { return block_; }
  const Rational& tail() const { return tail_; }
  std::size_t block_size() const { return block_.dim(); }
  bool is_square() const { return sgn(tail_) == 0; }

  /// <T e_{k+1}, e_{l+1}> for 0-based k, l of any size.
  RationalComplex entry(std::size_t k, std::size_t l) const;
  /// Block grown to `dim` with the tail scalar filling new diagonal slots.
  RationalHermitian block_padded(std::size_t dim) const {
    return block_.padded(std::max(dim, block_.dim()), tail_);
  }

  /// Smallest equivalent representation: trailing diagonal entries equal to
  /// the tail (and decoupled from the rest) are dropped, keeping dim >= 1.
  BlockScalarOperator trimmed() const;

  /// Exact operator equality (independent of representation size).
  friend bool operator==(const BlockScalarOperator& a, const BlockScalarOperator& b);

 private:
  RationalHermitian block_;
  Rational tail_;
};

/// sum_i coeff_i * T_i with the padding rule for mixed block sizes.
BlockScalarOperator combine(const std::vector<std::pair<Rational, BlockScalarOperator>>& terms);

/// A + B and A - B as shorthands for combine.
BlockScalarOperator add(const BlockScalarOperator& a, const BlockScalarOperator& b);
BlockScalarOperator subtract(const BlockScalarOperator& a, const BlockScalarOperator& b);
BlockScalarOperator scale(const Rational& c, const BlockScalarOperator& a);

/// A >= 0 on the whole space: tail >= 0 and block PSD (char-poly test).
bool is_psd(const BlockScalarOperator& a);
/// A > 0 with a uniform lower bound: tail > 0 and block positive definite.
bool is_positive_definite(const BlockScalarOperator& a);
/// A <= B in the Loewner order.
bool loewner_leq(const BlockScalarOperator& a, const BlockScalarOperator& b);

/// Block PSD decided by the signs of the characteristic polynomial.
bool is_psd_block(const RationalHermitian& b);
bool is_positive_definite_block(const RationalHermitian& b);

}  // namespace omegahat::linalg
