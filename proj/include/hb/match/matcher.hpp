#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hb/codec/template_codec.hpp"
#include "hb/rlwe/cipher.hpp"

namespace hb::match {

// euclid: public+secret keys only; innerprod: additionally relinearization
// and Galois keys (the key-inventory contrast between the two algorithms);
// plain: the exact-integer oracle.
enum class MatchMode { kEuclid, kInnerProd, kPlain };

const char* mode_name(MatchMode mode);
MatchMode mode_from_name(const std::string& name);

struct PerTemplateResult {
  std::size_t entry_index = 0;
  int rotation = 0;
  double distance_sq = 0.0;
  double similarity = 0.0;
};

struct MatchResult {
  MatchMode mode = MatchMode::kPlain;
  std::vector<PerTemplateResult> entries;  // in enrollment order
  PerTemplateResult best;                  // min distance; ties: lowest rotation, then index
  double seconds = 0.0;                    // wall clock of the encrypted portion
};

// Algorithm core for the Euclidean mode: st = sub(x, y), dt = mul(st, st),
// returned at degree 2 without relinearization. The signature carries no key
// material, so this path cannot consume relin or Galois keys.
rlwe::Ciphertext euclid_encrypted(const rlwe::FheContext& ctx, const rlwe::Ciphertext& ct_x,
                                  const rlwe::Ciphertext& ct_y);

// Inner-product mode: relinearize(mul(x, y)) then sum over all slots; every
// slot of the result decrypts to sum_i x_i * y_i. Missing key material is a
// KeyMaterialError.
rlwe::Ciphertext innerprod_encrypted(const rlwe::FheContext& ctx, const rlwe::Ciphertext& ct_x,
                                     const rlwe::Ciphertext& ct_y, const rlwe::RelinKey* rk,
                                     const rlwe::GaloisKeySet* gks);

struct PlainScore {
  std::int64_t dist_sq_quant = 0;
  std::int64_t ip_quant = 0;
  double distance_sq = 0.0;
  double similarity = 0.0;
};

// Exact integer oracle: d2 = sum (x_i - y_i)^2, ip = sum x_i * y_i, scores
// via the template-codec formulas for the requested mode.
PlainScore plain_oracle(const codec::QuantizedTemplate& qx, const codec::QuantizedTemplate& qy,
                        MatchMode mode);

// One server-side comparison (used by the protocol service and the
// in-process matcher). mode must be an encrypted mode.
rlwe::Ciphertext server_compute(const rlwe::FheContext& ctx, MatchMode mode,
                                const rlwe::Ciphertext& probe, const rlwe::Ciphertext& gallery,
                                const rlwe::RelinKey* rk, const rlwe::GaloisKeySet* gks);

// Client-side decryption and scoring of one encrypted comparison result.
PerTemplateResult client_score(const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                               MatchMode mode, const rlwe::Ciphertext& result_ct,
                               const rlwe::SecretKey& sk, const codec::EncodingProfile& profile);

struct EncryptedGalleryEntry {
  rlwe::Ciphertext ct;
  int rotation = 0;
};

// Aggregates the per-entry results by minimum distance (ties: lowest
// rotation index, then enrollment order). Entries may be computed in
// parallel; the merge is deterministic.
MatchResult match_one_to_one(const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                             const rlwe::Ciphertext& probe,
                             const std::vector<EncryptedGalleryEntry>& gallery, MatchMode mode,
                             const rlwe::SecretKey& sk, const codec::EncodingProfile& profile,
                             const rlwe::RelinKey* rk, const rlwe::GaloisKeySet* gks,
                             unsigned threads = 0);

struct PlainGalleryEntry {
  codec::QuantizedTemplate qt;
  int rotation = 0;
};

MatchResult match_one_to_one_plain(const codec::QuantizedTemplate& probe,
                                   const std::vector<PlainGalleryEntry>& gallery, MatchMode mode);

// Picks the aggregate from per-entry results (exposed for tests).
PerTemplateResult aggregate_min_distance(const std::vector<PerTemplateResult>& entries);

}  // namespace hb::match
