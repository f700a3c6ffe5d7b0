#pragma once

#include "omegahat/hermitian.hpp"

#include <vector>

namespace omegahat::linalg {

/// Coefficients of det(x I - B), highest degree first: result[0] == 1 and
/// result[k] multiplies x^(m-k). Exact; Hessenberg reduction over Q(i).
std::vector<Rational> char_poly(const RationalHermitian& b);

/// det(B), exact, by Gaussian elimination over Q(i).
RationalComplex determinant(const RationalHermitian& b);

/// PSD test through all 2^m - 1 principal minors. Exponential; kept as an
/// independent cross-check of the char-poly route for small blocks.
bool is_psd_by_principal_minors(const RationalHermitian& b);

}  // namespace omegahat::linalg
