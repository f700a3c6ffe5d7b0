#include "omegahat/state_vector.hpp"

namespace omegahat::linalg {

StateVector::StateVector(std::vector<RationalComplex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error("state vector needs at least one coefficient");
  Rational norm;
  for (const auto& c : coeffs_) norm += c.norm2();
  if (norm != 1) throw Error("state not normalized");
  while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
}

StateVector StateVector::basis(std::size_t k) {
  if (k == 0) throw Error("basis vectors are 1-based");
  std::vector<RationalComplex> c(k);
  c[k - 1] = RationalComplex(1);
  return StateVector(std::move(c));
}

Rational StateVector::mass_within(std::size_t m) const {
  Rational mass;
  for (std::size_t i = 0; i < coeffs_.size() && i < m; ++i) mass += coeffs_[i].norm2();
  return mass;
}

Rational quad_form(const BlockScalarOperator& a, const StateVector& x) {
  const auto& c = x.coeffs();
  const std::size_t overlap = std::min(c.size(), a.block_size());
  RationalComplex acc;
  for (std::size_t i = 0; i < overlap; ++i) {
    if (c[i].is_zero()) continue;
    RationalComplex row;
    for (std::size_t j = 0; j < overlap; ++j) {
      if (c[j].is_zero()) continue;
      row += a.block()(i, j) * c[j];
    }
    acc += c[i].conj() * row;
  }
  if (!acc.is_real()) throw Error("quadratic form of a Hermitian operator is not real");
  Rational outside = 1 - x.mass_within(a.block_size());
  return acc.re + a.tail() * outside;
}

}  // namespace omegahat::linalg
