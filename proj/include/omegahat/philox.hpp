#pragma once

#include <array>
#include <cstdint>

namespace omegahat {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output depends only on (counter, key), so draws can be evaluated in any
/// order or in parallel.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Sequential bit source over the blocks (stream, 0), (stream, 1), ...
class PhiloxBits {
 public:
  PhiloxBits(std::uint64_t seed, std::uint64_t stream);
  /// Next bit, most significant bit of each 32-bit word first.
  unsigned next();

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  unsigned used_ = 128;
};

}  // namespace omegahat
