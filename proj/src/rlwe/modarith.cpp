#include "hb/rlwe/modarith.hpp"

namespace hb::rlwe {

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 2^64.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 prev_prime_congruent(u64 hi, u64 m, u64 lo) {
  if (m == 0) throw UsageError("modulus for congruence search is zero");
  u64 c = hi - ((hi - 1) % m);  // largest value <= hi that is ≡ 1 (mod m)
  for (; c >= lo && c > m; c -= m) {
    if (is_prime_u64(c)) return c;
  }
  throw ParameterError("no prime ≡ 1 (mod m) in range");
}

u64 find_primitive_root_2n(u64 q, u64 two_n) {
  if ((q - 1) % two_n != 0) throw ParameterError("modulus not ≡ 1 (mod 2N)");
  u64 cofactor = (q - 1) / two_n;
  for (u64 g = 2; g < q; ++g) {
    u64 w = pow_mod(g, cofactor, q);
    // w has order dividing 2N; it is primitive iff w^(N) = -1.
    if (pow_mod(w, two_n / 2, q) == q - 1) return w;
  }
  throw ParameterError("no 2N-th primitive root found");
}

}  // namespace hb::rlwe
