#pragma once

#include "omegahat/block_operator.hpp"

#include <vector>

namespace omegahat::linalg {

/// Unit vector c_1 e_1 + ... + c_k e_k with rational complex coefficients.
/// Construction fails unless sum |c_i|^2 == 1 exactly.
class StateVector {
 public:
  explicit StateVector(std::vector<RationalComplex> coeffs);

  /// e_k (1-based).
  static StateVector basis(std::size_t k);

  std::size_t support() const { return coeffs_.size(); }
  const std::vector<RationalComplex>& coeffs() const { return coeffs_; }
  /// sum_{i <= m} |c_i|^2.
  Rational mass_within(std::size_t m) const;

 private:
  std::vector<RationalComplex> coeffs_;
};

/// <A x, x> = x^H block x over the overlap + tail * (mass of x beyond the block).
Rational quad_form(const BlockScalarOperator& a, const StateVector& x);

}  // namespace omegahat::linalg
