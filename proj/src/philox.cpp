#include "omegahat/philox.hpp"

namespace omegahat {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53;
constexpr std::uint32_t kM1 = 0xCD9E8D57;
constexpr std::uint32_t kW0 = 0x9E3779B9;
constexpr std::uint32_t kW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

PhiloxBits::PhiloxBits(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

unsigned PhiloxBits::next() {
  if (used_ == 128) {
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
                             static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)},
                            key_);
    ++block_;
    used_ = 0;
  }
  const unsigned word = used_ / 32;
  const unsigned bit = 31 - used_ % 32;
  ++used_;
  return (buffer_[word] >> bit) & 1U;
}

}  // namespace omegahat
