#include "omegahat/spectral.hpp"

#include "omegahat/charpoly.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>

namespace omegahat::linalg {

namespace {

// Precision for temporaries created inside the approximate eigensolver.
thread_local mpfr_prec_t work_prec = 64;

class Real {
 public:
  Real() {
    mpfr_init2(v_, work_prec);
    mpfr_set_zero(v_, 1);
  }
  explicit Real(const Rational& q) {
    mpfr_init2(v_, work_prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  explicit Real(long x) {
    mpfr_init2(v_, work_prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Rational exact() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }
  int sign() const { return mpfr_sgn(v_); }

  friend Real operator+(const Real& a, const Real& b) {
    Real r;
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r;
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r;
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r;
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a) {
    Real r;
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend Real sqrt(const Real& a) {
    Real r;
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real abs(const Real& a) {
    Real r;
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

struct Cx {
  Real re;
  Real im;

  Real norm2() const { return re * re + im * im; }
  Cx conj() const { return {re, -im}; }
  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator*(const Real& s, const Cx& a) { return {s * a.re, s * a.im}; }
  friend Cx operator/(const Cx& a, const Cx& b) {
    Real d = b.norm2();
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
};

using CxMatrix = std::vector<std::vector<Cx>>;
using QMatrix = std::vector<std::vector<RationalComplex>>;

class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t p) : saved_(work_prec) { work_prec = p; }
  ~PrecisionScope() { work_prec = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

CxMatrix cx_identity(std::size_t m) {
  CxMatrix q(m, std::vector<Cx>(m));
  for (std::size_t i = 0; i < m; ++i) q[i][i].re = Real(1L);
  return q;
}

// Cyclic complex Jacobi. Returns Q with B ~ Q diag Q^H (columns = eigenvectors).
CxMatrix jacobi_eigenvectors(const RationalHermitian& b, mpfr_prec_t prec) {
  const std::size_t m = b.dim();
  CxMatrix a(m, std::vector<Cx>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i][j] = {Real(b(i, j).re), Real(b(i, j).im)};
  }
  CxMatrix q = cx_identity(m);

  Real scale;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) scale = scale + a[i][j].norm2();
  }
  if (scale.sign() == 0) return q;
  Real tiny = scale * Real(pow2(-2 * static_cast<long>(prec)));
  Real stop = scale * Real(pow2(-2 * static_cast<long>(prec) + 32));

  for (int sweep = 0; sweep < 80; ++sweep) {
    Real off;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) off = off + a[i][j].norm2();
    }
    if (!(stop < off)) break;
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t r = p + 1; r < m; ++r) {
        Real n2 = a[p][r].norm2();
        if (!(tiny < n2)) continue;
        Real mag = sqrt(n2);
        Cx u{a[p][r].re / mag, a[p][r].im / mag};
        Real theta = (a[r][r].re - a[p][p].re) / (Real(2L) * mag);
        Real t = Real(1L) / (abs(theta) + sqrt(theta * theta + Real(1L)));
        if (theta.sign() < 0) t = -t;
        Real c = Real(1L) / sqrt(t * t + Real(1L));
        Real s = t * c;
        // G = diag(1, conj(u)) * [[c, s], [-s, c]] on coordinates (p, r).
        Cx gpp{c, Real()};
        Cx gpr{s, Real()};
        Cx grp = (-s) * u.conj();
        Cx grr = c * u.conj();
        for (std::size_t k = 0; k < m; ++k) {
          Cx x = a[k][p];
          Cx y = a[k][r];
          a[k][p] = x * gpp + y * grp;
          a[k][r] = x * gpr + y * grr;
        }
        for (std::size_t k = 0; k < m; ++k) {
          Cx x = a[p][k];
          Cx y = a[r][k];
          a[p][k] = gpp.conj() * x + grp.conj() * y;
          a[r][k] = gpr.conj() * x + grr.conj() * y;
        }
        a[p][r] = Cx{};
        a[r][p] = Cx{};
        a[p][p].im = Real();
        a[r][r].im = Real();
        for (std::size_t k = 0; k < m; ++k) {
          Cx x = q[k][p];
          Cx y = q[k][r];
          q[k][p] = x * gpp + y * grp;
          q[k][r] = x * gpr + y * grr;
        }
      }
    }
  }
  return q;
}

// Permutes and rephases the columns of a unitary so its diagonal is large
// and positive, keeping -1 away from the spectrum before the Cayley map.
CxMatrix align_columns(const CxMatrix& q) {
  const std::size_t m = q.size();
  std::vector<bool> row_used(m, false);
  std::vector<bool> col_used(m, false);
  std::vector<std::size_t> col_for_row(m);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t bi = 0;
    std::size_t bj = 0;
    Real best(-1L);
    for (std::size_t i = 0; i < m; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (col_used[j]) continue;
        Real v = q[i][j].norm2();
        if (best < v) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    row_used[bi] = true;
    col_used[bj] = true;
    col_for_row[bi] = bj;
  }
  CxMatrix out(m, std::vector<Cx>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = col_for_row[i];
    Cx pivot = q[i][j];
    Real mag = sqrt(pivot.norm2());
    Cx phase = Cx{pivot.re / mag, pivot.im / mag}.conj();
    for (std::size_t k = 0; k < m; ++k) out[k][i] = q[k][j] * phase;
  }
  return out;
}

CxMatrix cx_inverse(CxMatrix a) {
  const std::size_t m = a.size();
  CxMatrix inv = cx_identity(m);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (a[piv][col].norm2() < a[r][col].norm2()) piv = r;
    }
    if (a[piv][col].norm2().sign() == 0) throw Error("singular matrix in Cayley transform");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Cx d = a[col][col];
    for (std::size_t k = 0; k < m; ++k) {
      a[col][k] = a[col][k] / d;
      inv[col][k] = inv[col][k] / d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      Cx f = a[r][col];
      if (f.norm2().sign() == 0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        a[r][k] = a[r][k] - f * a[col][k];
        inv[r][k] = inv[r][k] - f * inv[col][k];
      }
    }
  }
  return inv;
}

QMatrix q_inverse(QMatrix a) {
  const std::size_t m = a.size();
  QMatrix inv(m, std::vector<RationalComplex>(m));
  for (std::size_t i = 0; i < m; ++i) inv[i][i] = RationalComplex(1);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col].is_zero()) ++piv;
    if (piv == m) throw Error("singular matrix in exact Cayley transform");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    RationalComplex d = a[col][col];
    for (std::size_t k = 0; k < m; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      RationalComplex f = a[r][col];
      for (std::size_t k = 0; k < m; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

QMatrix q_multiply(const QMatrix& x, const QMatrix& y) {
  const std::size_t m = x.size();
  QMatrix out(m, std::vector<RationalComplex>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      if (x[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += x[i][k] * y[k][j];
    }
  }
  return out;
}

// Exactly unitary rational matrix close to the approximate eigenbasis q.
QMatrix rational_unitary_near(const CxMatrix& q) {
  const std::size_t m = q.size();
  CxMatrix aligned = align_columns(q);
  CxMatrix plus = cx_identity(m);
  CxMatrix minus = cx_identity(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      plus[i][j] = plus[i][j] + aligned[i][j];
      minus[i][j] = minus[i][j] - aligned[i][j];
    }
  }
  CxMatrix plus_inv = cx_inverse(plus);
  // S = (I - Q)(I + Q)^-1 is skew-Hermitian for unitary Q; rebuild it exactly
  // skew-Hermitian from its upper triangle.
  QMatrix s(m, std::vector<RationalComplex>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      Cx v;
      for (std::size_t k = 0; k < m; ++k) v = v + minus[i][k] * plus_inv[k][j];
      if (i == j) {
        s[i][i] = RationalComplex(Rational(0), v.im.exact());
      } else {
        s[i][j] = RationalComplex(v.re.exact(), v.im.exact());
        s[j][i] = -s[i][j].conj();
      }
    }
  }
  QMatrix i_minus(m, std::vector<RationalComplex>(m));
  QMatrix i_plus(m, std::vector<RationalComplex>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      RationalComplex id = (i == j) ? RationalComplex(1) : RationalComplex(0);
      i_minus[i][j] = id - s[i][j];
      i_plus[i][j] = id + s[i][j];
    }
  }
  return q_multiply(i_minus, q_inverse(i_plus));
}

// Rational t > 0 with every eigenvalue of the (positive definite) block above t.
Rational spectral_lower_bound(const std::vector<Rational>& poly) {
  const std::size_t m = poly.size() - 1;
  Rational t(1);
  while (roots_above(poly, t) != m) t /= 2;
  return t;
}

Rational inv_ln2_upper(unsigned bits) {
  mpfr_t ln2;
  mpfr_t inv;
  mpfr_init2(ln2, bits + 16);
  mpfr_init2(inv, bits + 16);
  mpfr_const_log2(ln2, MPFR_RNDD);
  mpfr_ui_div(inv, 1, ln2, MPFR_RNDU);
  Rational q;
  mpfr_get_q(q.get_mpq_t(), inv);
  mpfr_clear(ln2);
  mpfr_clear(inv);
  return q;
}

std::size_t sign_changes(const std::vector<Rational>& c) {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& x : c) {
    int s = sgn(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

void isolate(const std::vector<Rational>& poly, const Rational& lo, const Rational& hi,
             std::size_t above_lo, std::size_t above_hi, const Rational& eps,
             std::vector<Interval>& out) {
  const std::size_t count = above_lo - above_hi;
  if (count == 0) return;
  if (hi - lo <= eps) {
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(lo, hi);
    return;
  }
  Rational mid = (lo + hi) / 2;
  std::size_t above_mid = roots_above(poly, mid);
  isolate(poly, lo, mid, above_lo, above_mid, eps, out);
  isolate(poly, mid, hi, above_mid, above_hi, eps, out);
}

}  // namespace

std::size_t roots_above(const std::vector<Rational>& p, const Rational& t) {
  // Taylor shift q(y) = p(y + t), ascending coefficients; Descartes' count is
  // exact for real-rooted polynomials.
  const std::size_t m = p.size() - 1;
  std::vector<Rational> a(m + 1);
  for (std::size_t i = 0; i <= m; ++i) a[i] = p[m - i];
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = m - 1; j + 1 > i; --j) a[j] += t * a[j + 1];
  }
  return sign_changes(a);
}

std::vector<Interval> eig_enclose(const RationalHermitian& b, const Rational& eps) {
  if (sgn(eps) <= 0) throw Error("eig_enclose requires eps > 0");
  std::vector<Interval> out;
  if (b.is_diagonal()) {
    for (std::size_t i = 0; i < b.dim(); ++i) out.push_back(Interval::point(b(i, i).re));
    std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    return out;
  }
  std::vector<Rational> poly = char_poly(b);
  Rational bound(1);
  for (std::size_t k = 1; k < poly.size(); ++k) bound = std::max(bound, Rational(abs(poly[k]) + 1));
  Rational r(1);
  while (r < bound) r *= 2;
  isolate(poly, Rational(-r), r, b.dim(), roots_above(poly, r), eps, out);
  return out;
}

Interval neg_log2_enclosure(const Rational& q, unsigned bits) {
  if (sgn(q) <= 0) throw NotPositiveDefinite("logarithm of a non-positive scalar");
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits) + 64;
  mpfr_t lo;
  mpfr_t hi;
  mpfr_init2(lo, prec);
  mpfr_init2(hi, prec);
  mpfr_set_q(lo, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi, q.get_mpq_t(), MPFR_RNDU);
  mpfr_log2(lo, lo, MPFR_RNDD);
  mpfr_log2(hi, hi, MPFR_RNDU);
  Rational log_lo;
  Rational log_hi;
  mpfr_get_q(log_lo.get_mpq_t(), lo);
  mpfr_get_q(log_hi.get_mpq_t(), hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return Interval(Rational(-log_hi), Rational(-log_lo)).rounded_out(bits);
}

IntervalHermitian spectral_neg_log2(const BlockScalarOperator& a, const Rational& eps) {
  if (sgn(eps) <= 0) throw Error("spectral_neg_log2 requires eps > 0");
  if (!is_positive_definite(a)) {
    throw NotPositiveDefinite("operator is not positive definite; no logarithm bound at this stage");
  }
  const RationalHermitian& b = a.block();
  const std::size_t m = b.dim();
  const unsigned out_bits = bits_for(eps) + 4;
  IntervalHermitian result(m, neg_log2_enclosure(a.tail(), out_bits));

  if (b.is_diagonal()) {
    for (std::size_t i = 0; i < m; ++i) {
      result.set(i, i, {neg_log2_enclosure(b(i, i).re, out_bits), Interval::point(Rational(0))});
      for (std::size_t j = i + 1; j < m; ++j) {
        result.set(i, j, {Interval::point(Rational(0)), Interval::point(Rational(0))});
      }
    }
    return result;
  }

  const Rational lower = spectral_lower_bound(char_poly(b));
  const Rational inv_ln2 = inv_ln2_upper(64);
  QMatrix bq(m, std::vector<RationalComplex>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) bq[i][j] = b(i, j);
  }

  for (mpfr_prec_t prec = static_cast<mpfr_prec_t>(out_bits) + 64; prec <= 4096; prec *= 2) {
    CxMatrix approx;
    {
      PrecisionScope scope(prec);
      approx = jacobi_eigenvectors(b, prec);
    }
    QMatrix u;
    {
      PrecisionScope scope(prec);
      u = rational_unitary_near(approx);
    }
    QMatrix uh(m, std::vector<RationalComplex>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) uh[i][j] = u[j][i].conj();
    }
    // C = U^H B U has B's spectrum; log C is within |C - diag C| / lower of log diag C.
    QMatrix c = q_multiply(uh, q_multiply(bq, u));
    Rational off2;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j) off2 += c[i][j].norm2();
      }
    }
    const Rational err = sqrt_upper(off2, out_bits + 8 + bits_for(lower)) * inv_ln2 / lower;
    if (err > eps / 4) continue;

    std::vector<Interval> logs;
    logs.reserve(m);
    for (std::size_t k = 0; k < m; ++k) logs.push_back(neg_log2_enclosure(c[k][k].re, out_bits + 4));

    IntervalHermitian candidate(m, result.tail());
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        Interval re = Interval::point(Rational(0));
        Interval im = Interval::point(Rational(0));
        for (std::size_t k = 0; k < m; ++k) {
          RationalComplex w = u[i][k] * u[j][k].conj();
          if (w.is_zero()) continue;
          re += w.re * logs[k];
          im += w.im * logs[k];
        }
        candidate.set(i, j, {re.widened(err).rounded_out(out_bits), im.widened(err).rounded_out(out_bits)});
      }
    }
    if (candidate.max_width() <= eps) return candidate;
  }
  throw Error("spectral_neg_log2 could not reach the requested enclosure width");
}

}  // namespace omegahat::linalg
