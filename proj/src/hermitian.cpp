#include "omegahat/hermitian.hpp"

namespace omegahat {

RationalComplex& RationalComplex::operator/=(const RationalComplex& o) {
  Rational d = o.norm2();
  if (sgn(d) == 0) throw Error("division by zero complex rational");
  Rational r = (re * o.re + im * o.im) / d;
  Rational i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string format_complex(const RationalComplex& z) {
  if (z.is_real()) return format_rational(z.re);
  return format_rational(z.re) + (sgn(z.im) < 0 ? " - " : " + ") + format_rational(abs(z.im)) + "i";
}

}  // namespace omegahat

namespace omegahat::linalg {

RationalHermitian::RationalHermitian(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw Error("Hermitian block must have dimension >= 1");
}

RationalHermitian RationalHermitian::from_rows(
    const std::vector<std::vector<RationalComplex>>& rows) {
  RationalHermitian h(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw Error("Hermitian block rows must be square");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i][i].is_real()) throw Error("Hermitian block has a non-real diagonal entry");
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[i][j] != rows[j][i].conj()) throw Error("block is not Hermitian");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) h.data_[i * h.dim_ + j] = rows[i][j];
  }
  return h;
}

RationalHermitian RationalHermitian::identity(std::size_t dim) {
  RationalHermitian h(dim);
  for (std::size_t i = 0; i < dim; ++i) h.data_[i * dim + i] = RationalComplex(1);
  return h;
}

RationalHermitian RationalHermitian::diagonal(const std::vector<Rational>& diag) {
  RationalHermitian h(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) h.data_[i * h.dim_ + i] = RationalComplex(diag[i]);
  return h;
}

void RationalHermitian::set(std::size_t i, std::size_t j, const RationalComplex& z) {
  if (i == j) {
    if (!z.is_real()) throw Error("Hermitian diagonal entries must be real");
    data_[i * dim_ + i] = z;
    return;
  }
  data_[i * dim_ + j] = z;
  data_[j * dim_ + i] = z.conj();
}

bool RationalHermitian::is_diagonal() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      if (!data_[i * dim_ + j].is_zero()) return false;
    }
  }
  return true;
}

bool RationalHermitian::is_zero() const {
  for (const auto& z : data_) {
    if (!z.is_zero()) return false;
  }
  return true;
}

RationalHermitian RationalHermitian::padded(std::size_t dim, const Rational& fill) const {
  if (dim < dim_) throw Error("cannot pad a block to a smaller dimension");
  if (dim == dim_) return *this;
  RationalHermitian h(dim);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) h.data_[i * dim + j] = data_[i * dim_ + j];
  }
  for (std::size_t i = dim_; i < dim; ++i) h.data_[i * dim + i] = RationalComplex(fill);
  return h;
}

RationalHermitian RationalHermitian::leading(std::size_t k) const {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  return principal(idx);
}

RationalHermitian RationalHermitian::principal(const std::vector<std::size_t>& idx) const {
  RationalHermitian h(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      h.data_[a * h.dim_ + b] = data_[idx[a] * dim_ + idx[b]];
    }
  }
  return h;
}

RationalHermitian& RationalHermitian::operator*=(const Rational& q) {
  for (auto& z : data_) z *= q;
  return *this;
}

RationalHermitian& RationalHermitian::operator+=(const RationalHermitian& o) {
  if (o.dim_ != dim_) throw Error("dimension mismatch in Hermitian sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

RationalHermitian& RationalHermitian::operator-=(const RationalHermitian& o) {
  if (o.dim_ != dim_) throw Error("dimension mismatch in Hermitian difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

}  // namespace omegahat::linalg
