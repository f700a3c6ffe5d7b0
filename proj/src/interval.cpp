#include "omegahat/interval.hpp"

#include <algorithm>

namespace omegahat::linalg {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo > hi) throw Error("interval with lower endpoint above upper endpoint");
}

Interval operator*(const Rational& c, const Interval& a) {
  if (sgn(c) >= 0) return {Rational(c * a.lo), Rational(c * a.hi)};
  return {Rational(c * a.hi), Rational(c * a.lo)};
}

Interval Interval::rounded_out(unsigned bits) const {
  return {floor_dyadic(lo, bits), ceil_dyadic(hi, bits)};
}

IntervalHermitian::IntervalHermitian(std::size_t dim, Interval tail)
    : dim_(dim), data_(dim * dim), tail_(std::move(tail)) {
  if (dim == 0) throw Error("interval block must have dimension >= 1");
}

void IntervalHermitian::set(std::size_t i, std::size_t j, const ComplexInterval& z) {
  if (i == j) {
    data_[i * dim_ + i] = {z.re, Interval::point(Rational(0))};
    return;
  }
  data_[i * dim_ + j] = z;
  data_[j * dim_ + i] = {z.re, {Rational(-z.im.hi), Rational(-z.im.lo)}};
}

Rational IntervalHermitian::max_width() const {
  Rational w = tail_.width();
  for (const auto& z : data_) w = std::max(w, z.width());
  return w;
}

bool IntervalHermitian::contains(const BlockScalarOperator& a) const {
  if (!tail_.contains(a.tail())) return false;
  const std::size_t m = std::max(dim_, a.block_size());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      RationalComplex v = a.entry(i, j);
      if (i < dim_ && j < dim_) {
        if (!(*this)(i, j).contains(v)) return false;
      } else if (i == j) {
        if (!tail_.contains(v.re) || !v.is_real()) return false;
      } else if (!v.is_zero()) {
        return false;
      }
    }
  }
  return true;
}

Interval quad_form(const IntervalHermitian& h, const StateVector& x) {
  const auto& c = x.coeffs();
  const std::size_t overlap = std::min(c.size(), h.dim());
  Interval acc = Interval::point(Rational(0));
  for (std::size_t i = 0; i < overlap; ++i) {
    for (std::size_t j = 0; j < overlap; ++j) {
      // Re(conj(c_i) * E_ij * c_j) with w = conj(c_i) c_j
      RationalComplex w = c[i].conj() * c[j];
      if (w.is_zero()) continue;
      acc += w.re * h(i, j).re;
      acc += Rational(-w.im) * h(i, j).im;
    }
  }
  acc += (1 - x.mass_within(h.dim())) * h.tail();
  return acc;
}

ComplexInterval entry(const IntervalHermitian& h, std::size_t i, std::size_t j) {
  if (i < h.dim() && j < h.dim()) return h(i, j);
  if (i == j) return {h.tail(), Interval::point(0)};
  return {Interval::point(0), Interval::point(0)};
}

namespace {

template <class Op>
IntervalHermitian entrywise(const IntervalHermitian& a, const IntervalHermitian& b, Op op) {
  const std::size_t dim = std::max(a.dim(), b.dim());
  IntervalHermitian out(dim, op(a.tail(), b.tail()));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const ComplexInterval x = entry(a, i, j);
      const ComplexInterval y = entry(b, i, j);
      out.set(i, j, {op(x.re, y.re), op(x.im, y.im)});
    }
  }
  return out;
}

}  // namespace

IntervalHermitian add(const IntervalHermitian& a, const IntervalHermitian& b) {
  return entrywise(a, b, [](const Interval& x, const Interval& y) { return x + y; });
}

IntervalHermitian subtract(const IntervalHermitian& a, const IntervalHermitian& b) {
  return entrywise(a, b, [](const Interval& x, const Interval& y) { return x - y; });
}

}  // namespace omegahat::linalg
