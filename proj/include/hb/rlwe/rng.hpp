#pragma once

#include <cstdint>
#include <vector>

#include "hb/common.hpp"
#include "hb/rlwe/poly.hpp"

namespace hb::rlwe {

// Seeded samplers for key and noise material. Integer-only so that streams
// are identical across platforms for a given seed.

// Uniform residues per modulus (CRT components independent => uniform mod q).
RnsPoly sample_uniform_rns(const FheContext& ctx, Prng& prng);

// Ternary vector with entries in {-1, 0, 1}.
std::vector<std::int8_t> sample_ternary(const FheContext& ctx, Prng& prng);

// Centered discrete Gaussian with the context's (sigma, B) via its CDT.
std::vector<std::int32_t> sample_gaussian(const FheContext& ctx, Prng& prng);

// Small signed vectors embedded into the RNS representation.
RnsPoly small_to_rns(const FheContext& ctx, const std::vector<std::int8_t>& v);
RnsPoly small_to_rns(const FheContext& ctx, const std::vector<std::int32_t>& v);

}  // namespace hb::rlwe
