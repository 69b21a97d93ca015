#pragma once

#include <cstdint>
#include <vector>

#include "hb/kernels/kernels.hpp"
#include "hb/rlwe/params.hpp"

namespace hb::rlwe {

enum class Domain : std::uint8_t { kCoeff = 0, kNtt = 1 };

// Polynomial over Z_m[X]/(X^N + 1) for a single modulus. The domain flag
// tracks whether coeffs holds coefficients or NTT evaluations; arithmetic
// that mixes domains throws.
struct RingPoly {
  u64 modulus = 0;
  Domain domain = Domain::kCoeff;
  std::vector<u64> coeffs;

  static RingPoly zero(u64 modulus, std::size_t n, Domain d = Domain::kCoeff) {
    return RingPoly{modulus, d, std::vector<u64>(n, 0)};
  }
};

void check_same_shape(const RingPoly& a, const RingPoly& b);

RingPoly poly_add(const RingPoly& a, const RingPoly& b);
RingPoly poly_sub(const RingPoly& a, const RingPoly& b);
RingPoly poly_negate(const RingPoly& a);
// Pointwise product; both operands must be in NTT domain.
RingPoly poly_mul_ntt(const RingPoly& a, const RingPoly& b);

// Domain conversions via a table whose modulus must match.
void to_ntt(RingPoly& p, const NttTable& table);
void to_coeff(RingPoly& p, const NttTable& table);

// Multiply in the ring regardless of current domain (round-trips through the
// table); mainly for tests and key generation, not hot paths.
RingPoly poly_mul(const RingPoly& a, const RingPoly& b, const NttTable& table);

// RNS aggregate: one residue vector per ciphertext modulus, all in the same
// domain. This is the storage form of ciphertext and key polynomials.
struct RnsPoly {
  Domain domain = Domain::kCoeff;
  std::vector<std::vector<u64>> comp;

  static RnsPoly zero(const FheContext& ctx, Domain d = Domain::kCoeff);
  std::size_t levels() const { return comp.size(); }
};

void rns_add_inplace(RnsPoly& a, const RnsPoly& b, const FheContext& ctx);
void rns_sub_inplace(RnsPoly& a, const RnsPoly& b, const FheContext& ctx);
void rns_negate_inplace(RnsPoly& a, const FheContext& ctx);
void rns_mul_pointwise_inplace(RnsPoly& a, const RnsPoly& b, const FheContext& ctx);
void rns_to_ntt(RnsPoly& p, const FheContext& ctx);
void rns_to_coeff(RnsPoly& p, const FheContext& ctx);

// Apply the ring automorphism X -> X^g (g odd) to a coefficient-domain poly.
void rns_automorphism(RnsPoly& p, u64 g, const FheContext& ctx);

}  // namespace hb::rlwe
