#pragma once

#include <cstdint>
#include <vector>

#include "hb/rlwe/encoder.hpp"

namespace hb::codec {

// Quantization/packing profile tying a template length and integer scale to
// a parameter set. Invariants guarantee no slot wraparound in either
// matching mode: (2(S+1))^2 < t for squared differences, S^2 + dim < t/2 for
// inner products of quantized unit vectors.
struct EncodingProfile {
  std::uint32_t dim = 0;
  std::uint32_t scale = 0;
  rlwe::ParamsId params_id{};
};

EncodingProfile make_profile(const rlwe::FheContext& ctx, std::uint32_t dim, std::uint32_t scale);

struct QuantizedTemplate {
  std::vector<std::int32_t> values;  // |v_i| <= scale + 1
  EncodingProfile profile;
};

// Scales v to unit Euclidean norm. Zero vectors are degenerate inputs.
std::vector<double> unit_normalize(const std::vector<double>& v);

// values_i = round(scale * v_i), rounding half away from zero. v must be
// unit-normalized (checked loosely; exact lattice points pass through).
QuantizedTemplate quantize(const std::vector<double>& v, const EncodingProfile& profile);

// Slots [0, dim) carry the centered values; slots [dim, N) are exactly zero.
rlwe::Plaintext pack_template(const QuantizedTemplate& qt, const rlwe::BatchEncoder& encoder);

struct EuclidScore {
  double distance_sq = 0.0;
  double similarity = 0.0;
};

// raw_slots: decoded slots of a Euclidean-mode result. distance_sq =
// sum(slot_i)/S^2 over i < dim; similarity = 1 - distance_sq/2. Any slot
// outside [0, (2(S+1))^2] or a nonzero padding slot signals noise overflow.
EuclidScore euclid_score_from_slots(const std::vector<std::int64_t>& raw_slots,
                                    const EncodingProfile& profile);

// Largest |<qx,qy>| achievable for quantized unit vectors under this
// profile; beyond it the decrypted slot signals corruption.
std::int64_t innerprod_quant_limit(const EncodingProfile& profile);

// raw_slot0: decoded slot 0 of an inner-product-mode result; similarity =
// slot0 / S^2. |slot0| beyond the achievable range signals corruption.
double innerprod_score_from_slot(std::int64_t raw_slot0, const EncodingProfile& profile);

// Score helpers shared with the plain oracle.
EuclidScore euclid_score_from_quant_distance(std::int64_t dist_sq_quant,
                                             const EncodingProfile& profile);
double innerprod_score_from_quant(std::int64_t ip_quant, const EncodingProfile& profile);

}  // namespace hb::codec
