#pragma once

#include "omegahat/block_operator.hpp"

#include <random>

namespace omegahat::testing {

/// Small random rationals p/q with |p| <= span, 1 <= q <= den.
inline Rational random_rational(std::mt19937_64& rng, long span = 4, long den = 4) {
  std::uniform_int_distribution<long> num(-span, span);
  std::uniform_int_distribution<long> d(1, den);
  Rational q(num(rng), d(rng));
  q.canonicalize();
  return q;
}

inline linalg::RationalHermitian random_hermitian(std::mt19937_64& rng, std::size_t m,
                                                  long span = 4, long den = 4) {
  linalg::RationalHermitian h(m);
  for (std::size_t i = 0; i < m; ++i) {
    h.set(i, i, RationalComplex(random_rational(rng, span, den)));
    for (std::size_t j = i + 1; j < m; ++j) {
      h.set(i, j, RationalComplex(random_rational(rng, span, den), random_rational(rng, span, den)));
    }
  }
  return h;
}

/// Gram matrix V^H V of a random m x m rational V: PSD, often singular
/// when V has dependent rows.
inline linalg::RationalHermitian random_gram(std::mt19937_64& rng, std::size_t m, std::size_t rank) {
  std::vector<std::vector<RationalComplex>> v(rank, std::vector<RationalComplex>(m));
  for (auto& row : v) {
    for (auto& z : row) z = RationalComplex(random_rational(rng, 3, 3), random_rational(rng, 3, 3));
  }
  linalg::RationalHermitian h(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      RationalComplex acc;
      for (std::size_t k = 0; k < rank; ++k) acc += v[k][i].conj() * v[k][j];
      h.set(i, j, acc);
    }
  }
  return h;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace omegahat::testing
