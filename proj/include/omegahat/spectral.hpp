#pragma once

#include "omegahat/block_operator.hpp"
#include "omegahat/interval.hpp"

#include <vector>

namespace omegahat::linalg {

/// Raised when a logarithm is requested for an operator that is not
/// uniformly positive.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Number of roots of the real-rooted polynomial `p` (highest degree first)
/// strictly above t, counted with multiplicity.
std::size_t roots_above(const std::vector<Rational>& p, const Rational& t);

/// Eigenvalue enclosures of B in ascending order, one per eigenvalue with
/// multiplicity, each of width <= eps. Exact sign counting plus bisection.
std::vector<Interval> eig_enclose(const RationalHermitian& b, const Rational& eps);

/// Enclosure of -log2(q) for q > 0, rounded outward to the 2^-bits grid.
Interval neg_log2_enclosure(const Rational& q, unsigned bits);

/// Entrywise enclosure of -log2(A) with widths <= eps.
/// Throws NotPositiveDefinite unless tail > 0 and the block is positive definite.
IntervalHermitian spectral_neg_log2(const BlockScalarOperator& a, const Rational& eps);

}  // namespace omegahat::linalg
