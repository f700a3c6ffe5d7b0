#include "omegahat/bitstring.hpp"

#include <bit>

namespace omegahat {

void require_bits(std::string_view bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error("not a binary string: \"" + std::string(bits) + "\"");
  }
}

Index to_index(std::string_view bits) {
  require_bits(bits);
  if (bits.size() >= 63) throw Error("binary string too long for an integer code");
  Index k = 1;
  for (char c : bits) k = (k << 1) | static_cast<Index>(c == '1');
  return k;
}

Bits from_index(Index k) {
  if (k == 0) throw Error("string codes start at 1");
  const int width = std::bit_width(k) - 1;
  Bits out(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((k >> (width - 1 - i)) & 1U) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

std::string display_bits(std::string_view bits) { return bits.empty() ? "λ" : std::string(bits); }

}  // namespace omegahat
