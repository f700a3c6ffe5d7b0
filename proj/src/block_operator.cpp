#include "omegahat/block_operator.hpp"

#include "omegahat/charpoly.hpp"

namespace omegahat::linalg {

BlockScalarOperator BlockScalarOperator::projector_scalar(std::size_t m, const Rational& scalar) {
  RationalHermitian b = RationalHermitian::identity(m);
  b *= scalar;
  return {std::move(b), Rational(0)};
}

RationalComplex BlockScalarOperator::entry(std::size_t k, std::size_t l) const {
  if (k < block_.dim() && l < block_.dim()) return block_(k, l);
  if (k == l) return RationalComplex(tail_);
  return RationalComplex(0);
}

BlockScalarOperator BlockScalarOperator::trimmed() const {
  std::size_t m = block_.dim();
  while (m > 1) {
    const std::size_t last = m - 1;
    if (block_(last, last).re != tail_) break;
    bool decoupled = true;
    for (std::size_t j = 0; j < last; ++j) {
      if (!block_(last, j).is_zero()) {
        decoupled = false;
        break;
      }
    }
    if (!decoupled) break;
    --m;
  }
  if (m == block_.dim()) return *this;
  return {block_.leading(m), tail_};
}

bool operator==(const BlockScalarOperator& a, const BlockScalarOperator& b) {
  if (a.tail_ != b.tail_) return false;
  const std::size_t m = std::max(a.block_size(), b.block_size());
  return a.block_padded(m) == b.block_padded(m);
}

BlockScalarOperator combine(const std::vector<std::pair<Rational, BlockScalarOperator>>& terms) {
  if (terms.empty()) throw Error("combine requires at least one term");
  std::size_t m = 1;
  for (const auto& [c, t] : terms) m = std::max(m, t.block_size());
  RationalHermitian block(m);
  Rational tail;
  for (const auto& [c, t] : terms) {
    if (sgn(c) == 0) continue;
    RationalHermitian padded = t.block_padded(m);
    padded *= c;
    block += padded;
    tail += c * t.tail();
  }
  return {std::move(block), std::move(tail)};
}

BlockScalarOperator add(const BlockScalarOperator& a, const BlockScalarOperator& b) {
  return combine({{Rational(1), a}, {Rational(1), b}});
}

BlockScalarOperator subtract(const BlockScalarOperator& a, const BlockScalarOperator& b) {
  return combine({{Rational(1), a}, {Rational(-1), b}});
}

BlockScalarOperator scale(const Rational& c, const BlockScalarOperator& a) {
  return combine({{c, a}});
}

bool is_psd_block(const RationalHermitian& b) {
  if (b.is_diagonal()) {
    for (std::size_t i = 0; i < b.dim(); ++i) {
      if (sgn(b(i, i).re) < 0) return false;
    }
    return true;
  }
  // det(xI - B) = sum_k (-1)^k e_k x^(m-k); a real-rooted polynomial has
  // only non-negative roots iff every e_k >= 0.
  std::vector<Rational> p = char_poly(b);
  for (std::size_t k = 1; k < p.size(); ++k) {
    int e_sign = (k % 2 == 0) ? sgn(p[k]) : -sgn(p[k]);
    if (e_sign < 0) return false;
  }
  return true;
}

bool is_positive_definite_block(const RationalHermitian& b) {
  if (b.is_diagonal()) {
    for (std::size_t i = 0; i < b.dim(); ++i) {
      if (sgn(b(i, i).re) <= 0) return false;
    }
    return true;
  }
  std::vector<Rational> p = char_poly(b);
  for (std::size_t k = 1; k < p.size(); ++k) {
    int e_sign = (k % 2 == 0) ? sgn(p[k]) : -sgn(p[k]);
    if (e_sign < 0) return false;
  }
  return sgn(p.back()) != 0;
}

bool is_psd(const BlockScalarOperator& a) {
  return sgn(a.tail()) >= 0 && is_psd_block(a.block());
}

bool is_positive_definite(const BlockScalarOperator& a) {
  return sgn(a.tail()) > 0 && is_positive_definite_block(a.block());
}

bool loewner_leq(const BlockScalarOperator& a, const BlockScalarOperator& b) {
  return is_psd(subtract(b, a));
}

}  // namespace omegahat::linalg
