#pragma once

#include <cstdint>
#include <vector>

#include "hb/common.hpp"

// 64-bit modular arithmetic for NTT-friendly primes (< 2^63).
namespace hb::rlwe {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;
using i128 = __int128;

inline u64 add_mod(u64 a, u64 b, u64 q) {
  u64 s = a + b;
  return s >= q ? s - q : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 q) {
  return a >= b ? a - b : a + q - b;
}

inline u64 mul_mod(u64 a, u64 b, u64 q) {
  return static_cast<u64>((static_cast<u128>(a) * b) % q);
}

// Shoup multiplication: for a fixed multiplier w, precompute
// w' = floor(w * 2^64 / q); then mul_mod_shoup costs one mulhi + one mullo.
inline u64 shoup_precompute(u64 w, u64 q) {
  return static_cast<u64>((static_cast<u128>(w) << 64) / q);
}

// Requires w < q, x < q, wp = shoup_precompute(w, q). Result in [0, q).
inline u64 mul_mod_shoup(u64 x, u64 w, u64 wp, u64 q) {
  u64 hi = static_cast<u64>((static_cast<u128>(x) * wp) >> 64);
  u64 r = x * w - hi * q;
  return r >= q ? r - q : r;
}

inline u64 pow_mod(u64 base, u64 exp, u64 q) {
  u64 r = 1 % q;
  u64 b = base % q;
  while (exp) {
    if (exp & 1) r = mul_mod(r, b, q);
    b = mul_mod(b, b, q);
    exp >>= 1;
  }
  return r;
}

// Inverse by Fermat (q prime). a must be nonzero mod q.
inline u64 inv_mod(u64 a, u64 q) {
  if (a % q == 0) throw UsageError("inv_mod of zero");
  return pow_mod(a, q - 2, q);
}

inline u64 neg_mod(u64 a, u64 q) { return a == 0 ? 0 : q - a; }

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(u64 n);

// Largest prime p <= hi with p ≡ 1 (mod m). Throws ParameterError if none
// above lo. Used to derive NTT-friendly moduli deterministically.
u64 prev_prime_congruent(u64 hi, u64 m, u64 lo);

// Finds a generator of the 2N-th roots of unity mod q (q ≡ 1 mod 2N):
// returns w with order exactly 2N.
u64 find_primitive_root_2n(u64 q, u64 two_n);

}  // namespace hb::rlwe
