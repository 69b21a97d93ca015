#include "hb/codec/template_codec.hpp"

#include <cmath>

#include "hb/kernels/kernels.hpp"

namespace hb::codec {

EncodingProfile make_profile(const rlwe::FheContext& ctx, std::uint32_t dim, std::uint32_t scale) {
  if (dim == 0 || dim > ctx.n()) throw UsageError("profile dim must be in [1, N]");
  if (scale == 0) throw UsageError("profile scale must be positive");
  if (scale > ctx.max_scale()) throw ParameterError("scale exceeds what the plain modulus supports");
  auto t = static_cast<std::uint64_t>(ctx.t());
  std::uint64_t s1 = scale + 1;
  if (4 * (2 * s1) * (2 * s1) >= t) throw ParameterError("Euclidean slot range would wrap mod t");
  // achievable |<qx,qy>| for quantized unit vectors: S^2 + S*sqrt(dim) + dim/4
  double ip_bound = static_cast<double>(scale) * scale +
                    static_cast<double>(scale) * std::sqrt(static_cast<double>(dim)) +
                    static_cast<double>(dim) / 4.0;
  if (ip_bound >= static_cast<double>(t) / 2.0)
    throw ParameterError("inner-product range would wrap mod t");
  EncodingProfile p;
  p.dim = dim;
  p.scale = scale;
  p.params_id = ctx.id();
  return p;
}

std::vector<double> unit_normalize(const std::vector<double>& v) {
  if (v.empty()) throw DegenerateInputError("empty vector");
  double norm_sq = kernels::dot_f64(v.data(), v.data(), v.size());
  if (norm_sq <= 0.0 || !std::isfinite(norm_sq)) throw DegenerateInputError("zero or invalid norm");
  double inv = 1.0 / std::sqrt(norm_sq);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
  return out;
}

QuantizedTemplate quantize(const std::vector<double>& v, const EncodingProfile& profile) {
  if (v.size() != profile.dim) throw UsageError("vector length does not match profile dim");
  double norm_sq = kernels::dot_f64(v.data(), v.data(), v.size());
  if (std::abs(norm_sq - 1.0) > 1e-6) throw UsageError("quantize expects a unit vector");
  QuantizedTemplate qt;
  qt.profile = profile;
  qt.values.resize(v.size());
  auto s = static_cast<double>(profile.scale);
  auto limit = static_cast<std::int64_t>(profile.scale) + 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double scaled = s * v[i];
    // half away from zero
    auto r = static_cast<std::int64_t>(scaled >= 0 ? std::floor(scaled + 0.5)
                                                   : std::ceil(scaled - 0.5));
    if (r > limit || r < -limit) throw OverflowError("quantized value out of range");
    qt.values[i] = static_cast<std::int32_t>(r);
  }
  return qt;
}

rlwe::Plaintext pack_template(const QuantizedTemplate& qt, const rlwe::BatchEncoder& encoder) {
  if (qt.profile.params_id != encoder.context().id())
    throw UsageError("template profile does not match encoder params");
  std::vector<std::int64_t> slots(qt.values.begin(), qt.values.end());
  return encoder.encode(slots);  // remaining slots are zero by the encode contract
}

EuclidScore euclid_score_from_quant_distance(std::int64_t dist_sq_quant,
                                             const EncodingProfile& profile) {
  double s2 = static_cast<double>(profile.scale) * static_cast<double>(profile.scale);
  EuclidScore out;
  out.distance_sq = static_cast<double>(dist_sq_quant) / s2;
  out.similarity = 1.0 - out.distance_sq / 2.0;
  return out;
}

EuclidScore euclid_score_from_slots(const std::vector<std::int64_t>& raw_slots,
                                    const EncodingProfile& profile) {
  if (raw_slots.size() < profile.dim) throw UsageError("slot vector shorter than profile dim");
  auto limit = static_cast<std::int64_t>(2 * (profile.scale + 1)) *
               static_cast<std::int64_t>(2 * (profile.scale + 1));
  std::int64_t total = 0;
  for (std::size_t i = 0; i < profile.dim; ++i) {
    std::int64_t v = raw_slots[i];
    if (v < 0 || v > limit) throw CorruptionError("Euclidean slot outside achievable range");
    total += v;
  }
  for (std::size_t i = profile.dim; i < raw_slots.size(); ++i) {
    if (raw_slots[i] != 0) throw CorruptionError("nonzero padding slot");
  }
  return euclid_score_from_quant_distance(total, profile);
}

double innerprod_score_from_quant(std::int64_t ip_quant, const EncodingProfile& profile) {
  double s2 = static_cast<double>(profile.scale) * static_cast<double>(profile.scale);
  return static_cast<double>(ip_quant) / s2;
}

std::int64_t innerprod_quant_limit(const EncodingProfile& profile) {
  // |<qx,qy>| <= |qx| |qy| <= S^2 + S*sqrt(dim) + dim/4 for quantized unit
  // vectors (Cauchy-Schwarz plus the worst-case rounding drift).
  double s = profile.scale;
  double bound = s * s + s * std::sqrt(static_cast<double>(profile.dim)) +
                 static_cast<double>(profile.dim) / 4.0;
  return static_cast<std::int64_t>(std::ceil(bound));
}

double innerprod_score_from_slot(std::int64_t raw_slot0, const EncodingProfile& profile) {
  auto limit = innerprod_quant_limit(profile);
  if (raw_slot0 > limit || raw_slot0 < -limit)
    throw CorruptionError("inner-product slot outside achievable range");
  return innerprod_score_from_quant(raw_slot0, profile);
}

}  // namespace hb::codec
