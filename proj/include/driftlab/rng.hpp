#pragma once

// Counter-based random numbers: Philox4x32-10 (passes the standard TestU01
// batteries). The 128-bit counter is laid out as (block_lo, block_hi,
// stream_lo, stream_hi), so independent streams are obtained by giving each
// consumer its own stream index under a shared seed; every stream yields the
// same sequence on every platform.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace driftlab {

class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint64_t next_u64() {
    if (buf_pos_ >= 2) refill();
    const std::uint64_t lo = buf_[2 * buf_pos_];
    const std::uint64_t hi = buf_[2 * buf_pos_ + 1];
    ++buf_pos_;
    return lo | (hi << 32);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    cached_ = r * std::sin(phi);
    have_cached_ = true;
    return r * std::cos(phi);
  }

 private:
  static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b, std::uint32_t* lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    *lo = static_cast<std::uint32_t>(p);
    return static_cast<std::uint32_t>(p >> 32);
  }

  void refill() {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    std::array<std::uint32_t, 4> x = ctr_;
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      std::uint32_t lo0, lo1;
      const std::uint32_t hi0 = mulhi(kM0, x[0], &lo0);
      const std::uint32_t hi1 = mulhi(kM1, x[2], &lo1);
      x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
      k0 += kW0;
      k1 += kW1;
    }
    buf_ = x;
    buf_pos_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter within the stream
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 2;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace driftlab
