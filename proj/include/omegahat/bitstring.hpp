#pragma once

#include "omegahat/rational.hpp"

#include <string>
#include <string_view>

namespace omegahat {

/// Finite binary string as characters '0' / '1'. The empty string is lambda.
using Bits = std::string;

/// phi(s): the value of "1s" read in binary (lambda -> 1, "0" -> 2, ...).
Index to_index(std::string_view bits);

/// Inverse of to_index; k >= 1.
Bits from_index(Index k);

/// Throws Error unless every character is '0' or '1'.
void require_bits(std::string_view bits);

/// Human-readable form: "λ" for the empty string, otherwise the bits.
std::string display_bits(std::string_view bits);

}  // namespace omegahat
