#include "hb/match/matcher.hpp"

#include <chrono>

#include "hb/kernels/kernels.hpp"

namespace hb::match {

const char* mode_name(MatchMode mode) {
  switch (mode) {
    case MatchMode::kEuclid:
      return "euclid";
    case MatchMode::kInnerProd:
      return "innerprod";
    case MatchMode::kPlain:
      return "plain";
  }
  return "?";
}

MatchMode mode_from_name(const std::string& name) {
  if (name == "euclid") return MatchMode::kEuclid;
  if (name == "innerprod") return MatchMode::kInnerProd;
  if (name == "plain") return MatchMode::kPlain;
  throw UsageError("unknown match mode: " + name);
}

rlwe::Ciphertext euclid_encrypted(const rlwe::FheContext& ctx, const rlwe::Ciphertext& ct_x,
                                  const rlwe::Ciphertext& ct_y) {
  rlwe::Ciphertext st = rlwe::hsub(ctx, ct_x, ct_y);
  return rlwe::hmul(ctx, st, st);
}

rlwe::Ciphertext innerprod_encrypted(const rlwe::FheContext& ctx, const rlwe::Ciphertext& ct_x,
                                     const rlwe::Ciphertext& ct_y, const rlwe::RelinKey* rk,
                                     const rlwe::GaloisKeySet* gks) {
  if (!rk) throw KeyMaterialError("inner-product mode requires a relinearization key");
  if (!gks) throw KeyMaterialError("inner-product mode requires Galois keys");
  rlwe::Ciphertext prod = rlwe::relinearize(ctx, rlwe::hmul(ctx, ct_x, ct_y), *rk);
  return rlwe::sum_slots(ctx, prod, *gks);
}

PlainScore plain_oracle(const codec::QuantizedTemplate& qx, const codec::QuantizedTemplate& qy,
                        MatchMode mode) {
  if (qx.profile.dim != qy.profile.dim || qx.profile.scale != qy.profile.scale ||
      qx.profile.params_id != qy.profile.params_id)
    throw UsageError("quantized templates have different profiles");
  PlainScore s;
  s.dist_sq_quant = kernels::sqdiff_i32(qx.values.data(), qy.values.data(), qx.values.size());
  s.ip_quant = kernels::dot_i32(qx.values.data(), qy.values.data(), qx.values.size());
  if (mode == MatchMode::kInnerProd) {
    s.similarity = codec::innerprod_score_from_quant(s.ip_quant, qx.profile);
    s.distance_sq = 2.0 - 2.0 * s.similarity;
  } else {
    auto e = codec::euclid_score_from_quant_distance(s.dist_sq_quant, qx.profile);
    s.distance_sq = e.distance_sq;
    s.similarity = e.similarity;
  }
  return s;
}

rlwe::Ciphertext server_compute(const rlwe::FheContext& ctx, MatchMode mode,
                                const rlwe::Ciphertext& probe, const rlwe::Ciphertext& gallery,
                                const rlwe::RelinKey* rk, const rlwe::GaloisKeySet* gks) {
  switch (mode) {
    case MatchMode::kEuclid:
      return euclid_encrypted(ctx, gallery, probe);
    case MatchMode::kInnerProd:
      return innerprod_encrypted(ctx, gallery, probe, rk, gks);
    case MatchMode::kPlain:
      break;
  }
  throw UsageError("plain mode has no encrypted computation");
}

PerTemplateResult client_score(const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                               MatchMode mode, const rlwe::Ciphertext& result_ct,
                               const rlwe::SecretKey& sk, const codec::EncodingProfile& profile) {
  auto slots = encoder.decode(rlwe::decrypt(ctx, sk, result_ct));
  PerTemplateResult r;
  if (mode == MatchMode::kEuclid) {
    auto e = codec::euclid_score_from_slots(slots, profile);
    r.distance_sq = e.distance_sq;
    r.similarity = e.similarity;
  } else if (mode == MatchMode::kInnerProd) {
    r.similarity = codec::innerprod_score_from_slot(slots[0], profile);
    r.distance_sq = 2.0 - 2.0 * r.similarity;
  } else {
    throw UsageError("plain mode has no ciphertext to score");
  }
  return r;
}

PerTemplateResult aggregate_min_distance(const std::vector<PerTemplateResult>& entries) {
  if (entries.empty()) throw UsageError("empty gallery");
  const PerTemplateResult* best = &entries[0];
  for (const auto& e : entries) {
    if (e.distance_sq < best->distance_sq ||
        (e.distance_sq == best->distance_sq &&
         (e.rotation < best->rotation ||
          (e.rotation == best->rotation && e.entry_index < best->entry_index)))) {
      best = &e;
    }
  }
  return *best;
}

MatchResult match_one_to_one(const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                             const rlwe::Ciphertext& probe,
                             const std::vector<EncryptedGalleryEntry>& gallery, MatchMode mode,
                             const rlwe::SecretKey& sk, const codec::EncodingProfile& profile,
                             const rlwe::RelinKey* rk, const rlwe::GaloisKeySet* gks,
                             unsigned threads) {
  if (gallery.empty()) throw UsageError("empty gallery");
  if (mode == MatchMode::kPlain) throw UsageError("use match_one_to_one_plain for the oracle");
  MatchResult result;
  result.mode = mode;
  result.entries.resize(gallery.size());
  auto start = std::chrono::steady_clock::now();
  parallel_for(
      gallery.size(),
      [&](std::size_t i) {
        rlwe::Ciphertext enc = server_compute(ctx, mode, probe, gallery[i].ct, rk, gks);
        PerTemplateResult r = client_score(ctx, encoder, mode, enc, sk, profile);
        r.entry_index = i;
        r.rotation = gallery[i].rotation;
        result.entries[i] = r;
      },
      threads);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.best = aggregate_min_distance(result.entries);
  return result;
}

MatchResult match_one_to_one_plain(const codec::QuantizedTemplate& probe,
                                   const std::vector<PlainGalleryEntry>& gallery, MatchMode mode) {
  if (gallery.empty()) throw UsageError("empty gallery");
  MatchResult result;
  result.mode = MatchMode::kPlain;
  result.entries.resize(gallery.size());
  auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    PlainScore s = plain_oracle(gallery[i].qt, probe, mode == MatchMode::kPlain
                                                          ? MatchMode::kEuclid
                                                          : mode);
    PerTemplateResult r;
    r.entry_index = i;
    r.rotation = gallery[i].rotation;
    r.distance_sq = s.distance_sq;
    r.similarity = s.similarity;
    result.entries[i] = r;
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.best = aggregate_min_distance(result.entries);
  return result;
}

}  // namespace hb::match
