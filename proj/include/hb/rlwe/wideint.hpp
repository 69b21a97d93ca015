#pragma once

#include <array>
#include <cstdint>

#include "hb/common.hpp"

namespace hb::rlwe {

// Fixed-width 384-bit unsigned integer. Wide enough for the exact BFV
// multiplication pipeline: tensor coefficients are < N*q^2 (~2^259 at
// production parameters) and get multiplied by t (~2^20) before the
// rounding division, so ~280 bits of headroom are required.
class U384 {
 public:
  static constexpr int kLimbs = 6;

  U384() : limbs_{} {}
  explicit U384(std::uint64_t v) : limbs_{} { limbs_[0] = v; }

  static U384 from_u128(unsigned __int128 v) {
    U384 r;
    r.limbs_[0] = static_cast<std::uint64_t>(v);
    r.limbs_[1] = static_cast<std::uint64_t>(v >> 64);
    return r;
  }

  std::uint64_t limb(int i) const { return limbs_[static_cast<std::size_t>(i)]; }

  bool is_zero() const {
    for (auto l : limbs_)
      if (l) return false;
    return true;
  }

  // Overflow is an invariant violation, not an input condition: callers size
  // their operands so 384 bits always suffice.
  void add(const U384& o) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < kLimbs; ++i) {
      unsigned __int128 s = static_cast<unsigned __int128>(limbs_[i]) + o.limbs_[i] + carry;
      limbs_[i] = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
    if (carry) throw OverflowError("U384 add overflow");
  }

  void add_u64(std::uint64_t v) {
    U384 o(v);
    add(o);
  }

  // this -= o; requires this >= o.
  void sub(const U384& o) {
    if (cmp(o) < 0) throw OverflowError("U384 sub underflow");
    unsigned __int128 borrow = 0;
    for (int i = 0; i < kLimbs; ++i) {
      unsigned __int128 d = static_cast<unsigned __int128>(limbs_[i]) - o.limbs_[i] - borrow;
      limbs_[i] = static_cast<std::uint64_t>(d);
      borrow = (d >> 64) ? 1 : 0;
    }
  }

  void mul_u64(std::uint64_t v) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < kLimbs; ++i) {
      unsigned __int128 p = static_cast<unsigned __int128>(limbs_[i]) * v + carry;
      limbs_[i] = static_cast<std::uint64_t>(p);
      carry = p >> 64;
    }
    if (carry) throw OverflowError("U384 mul overflow");
  }

  // Long division by a 64-bit divisor; returns the remainder.
  std::uint64_t divmod_u64(std::uint64_t d) {
    if (d == 0) throw UsageError("U384 divide by zero");
    unsigned __int128 rem = 0;
    for (int i = kLimbs - 1; i >= 0; --i) {
      unsigned __int128 cur = (rem << 64) | limbs_[i];
      limbs_[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(cur / d);
      rem = cur % d;
    }
    return static_cast<std::uint64_t>(rem);
  }

  std::uint64_t mod_u64(std::uint64_t d) const {
    if (d == 0) throw UsageError("U384 mod by zero");
    unsigned __int128 rem = 0;
    for (int i = kLimbs - 1; i >= 0; --i) {
      rem = ((rem << 64) | limbs_[static_cast<std::size_t>(i)]) % d;
    }
    return static_cast<std::uint64_t>(rem);
  }

  int cmp(const U384& o) const {
    for (int i = kLimbs - 1; i >= 0; --i) {
      if (limbs_[static_cast<std::size_t>(i)] != o.limbs_[static_cast<std::size_t>(i)])
        return limbs_[static_cast<std::size_t>(i)] < o.limbs_[static_cast<std::size_t>(i)] ? -1 : 1;
    }
    return 0;
  }

  bool operator==(const U384& o) const { return cmp(o) == 0; }

  // Value as u128; caller guarantees the value fits.
  unsigned __int128 to_u128() const {
    for (int i = 2; i < kLimbs; ++i)
      if (limbs_[static_cast<std::size_t>(i)]) throw OverflowError("U384 does not fit in 128 bits");
    return (static_cast<unsigned __int128>(limbs_[1]) << 64) | limbs_[0];
  }

  int bit_length() const {
    for (int i = kLimbs - 1; i >= 0; --i) {
      if (limbs_[static_cast<std::size_t>(i)]) {
        return 64 * i + (64 - __builtin_clzll(limbs_[static_cast<std::size_t>(i)]));
      }
    }
    return 0;
  }

  U384 shl(int bits) const {
    if (bits < 0 || bit_length() + bits > 64 * kLimbs) throw OverflowError("U384 shl overflow");
    U384 r;
    int limb_shift = bits / 64, bit_shift = bits % 64;
    for (int i = kLimbs - 1; i >= limb_shift; --i) {
      std::uint64_t v = limbs_[static_cast<std::size_t>(i - limb_shift)] << bit_shift;
      if (bit_shift && i - limb_shift - 1 >= 0)
        v |= limbs_[static_cast<std::size_t>(i - limb_shift - 1)] >> (64 - bit_shift);
      r.limbs_[static_cast<std::size_t>(i)] = v;
    }
    return r;
  }

 private:
  std::array<std::uint64_t, kLimbs> limbs_;
};

}  // namespace hb::rlwe
