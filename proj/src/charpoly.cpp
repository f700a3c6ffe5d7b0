#include "omegahat/charpoly.hpp"

#include <utility>

namespace omegahat::linalg {

namespace {

using Dense = std::vector<std::vector<RationalComplex>>;

Dense to_dense(const RationalHermitian& b) {
  Dense a(b.dim(), std::vector<RationalComplex>(b.dim()));
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) a[i][j] = b(i, j);
  }
  return a;
}

// Similarity reduction to upper Hessenberg form by stabilized elementary
// transformations; exact over Q(i), so no pivot-size strategy is needed.
void reduce_to_hessenberg(Dense& a) {
  const std::size_t m = a.size();
  for (std::size_t k = 0; k + 2 < m; ++k) {
    std::size_t pivot = m;
    for (std::size_t i = k + 1; i < m; ++i) {
      if (!a[i][k].is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot == m) continue;
    if (pivot != k + 1) {
      std::swap(a[pivot], a[k + 1]);
      for (auto& row : a) std::swap(row[pivot], row[k + 1]);
    }
    const RationalComplex inv = RationalComplex(1) / a[k + 1][k];
    for (std::size_t i = k + 2; i < m; ++i) {
      if (a[i][k].is_zero()) continue;
      RationalComplex u = a[i][k] * inv;
      for (std::size_t j = k; j < m; ++j) a[i][j] -= u * a[k + 1][j];
      for (std::size_t r = 0; r < m; ++r) a[r][k + 1] += u * a[r][i];
    }
  }
}

}  // namespace

std::vector<Rational> char_poly(const RationalHermitian& b) {
  const std::size_t m = b.dim();
  if (b.is_diagonal()) {
    // prod (x - d_i), accumulated lowest-degree-last.
    std::vector<Rational> p{Rational(1)};
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& d = b(i, i).re;
      std::vector<Rational> next(p.size() + 1);
      for (std::size_t k = 0; k < p.size(); ++k) {
        next[k] += p[k];
        next[k + 1] -= d * p[k];
      }
      p = std::move(next);
    }
    return p;
  }

  Dense h = to_dense(b);
  reduce_to_hessenberg(h);

  // polys[k] = char poly of the leading k x k Hessenberg block, stored with
  // index = power of x.
  std::vector<std::vector<RationalComplex>> polys(m + 1);
  polys[0] = {RationalComplex(1)};
  for (std::size_t k = 1; k <= m; ++k) {
    const std::size_t c = k - 1;  // 0-based column of the new block
    std::vector<RationalComplex> p(k + 1);
    const auto& prev = polys[k - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      p[d + 1] += prev[d];
      p[d] -= h[c][c] * prev[d];
    }
    RationalComplex sub(1);
    for (std::size_t i = c; i-- > 0;) {
      sub *= h[i + 1][i];
      if (sub.is_zero()) break;
      RationalComplex factor = h[i][c] * sub;
      if (factor.is_zero()) continue;
      const auto& q = polys[i];
      for (std::size_t d = 0; d < q.size(); ++d) p[d] -= factor * q[d];
    }
    polys[k] = std::move(p);
  }

  std::vector<Rational> out(m + 1);
  for (std::size_t d = 0; d <= m; ++d) {
    const RationalComplex& coeff = polys[m][d];
    if (!coeff.is_real()) throw Error("characteristic polynomial of a Hermitian block is not real");
    out[m - d] = coeff.re;
  }
  return out;
}

RationalComplex determinant(const RationalHermitian& b) {
  Dense a = to_dense(b);
  const std::size_t m = a.size();
  RationalComplex det(1);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t pivot = m;
    for (std::size_t i = k; i < m; ++i) {
      if (!a[i][k].is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot == m) return RationalComplex(0);
    if (pivot != k) {
      std::swap(a[pivot], a[k]);
      det = -det;
    }
    det *= a[k][k];
    const RationalComplex inv = RationalComplex(1) / a[k][k];
    for (std::size_t i = k + 1; i < m; ++i) {
      if (a[i][k].is_zero()) continue;
      RationalComplex u = a[i][k] * inv;
      for (std::size_t j = k; j < m; ++j) a[i][j] -= u * a[k][j];
    }
  }
  return det;
}

bool is_psd_by_principal_minors(const RationalHermitian& b) {
  const std::size_t m = b.dim();
  if (m > 20) throw Error("principal-minor scan is limited to blocks of size <= 20");
  for (unsigned long mask = 1; mask < (1UL << m); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1UL << i)) idx.push_back(i);
    }
    RationalComplex d = determinant(b.principal(idx));
    if (sgn(d.re) < 0) return false;
  }
  return true;
}

}  // namespace omegahat::linalg
