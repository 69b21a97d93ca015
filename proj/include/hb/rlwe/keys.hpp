#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hb/rlwe/encoder.hpp"
#include "hb/rlwe/poly.hpp"
#include "hb/rlwe/rng.hpp"

namespace hb::rlwe {

// Ternary secret with cached NTT forms of s and s^2 (degree-2 decryption
// needs both). Caches are pure functions of s and are rebuilt on load.
struct SecretKey {
  std::vector<std::int8_t> s;
  ParamsId params_id{};
  RnsPoly s_ntt;
  RnsPoly s2_ntt;
};

struct PublicKey {
  RnsPoly pk0, pk1;  // coefficient domain (canonical form)
  ParamsId params_id{};
  RnsPoly pk0_ntt, pk1_ntt;  // caches for encryption
};

// Key-switch material: digit i encrypts 2^(w*i) * T under s, where T is the
// switched-out key (s^2 for relinearization, s(X^g) for Galois keys).
struct KSwitchKey {
  std::vector<std::pair<RnsPoly, RnsPoly>> digits;  // NTT domain at runtime
};

struct RelinKey {
  KSwitchKey ks;
  ParamsId params_id{};
};

struct GaloisKeySet {
  std::map<u64, KSwitchKey> keys;  // automorphism exponent -> material
  ParamsId params_id{};

  bool has(u64 exponent) const { return keys.count(exponent) != 0; }
};

std::pair<SecretKey, PublicKey> keygen(const FheContext& ctx, const Seed& seed);

RelinKey relin_keygen(const FheContext& ctx, const SecretKey& sk, const Seed& seed);

// exponents: odd automorphism exponents mod 2N. Empty list is a usage error;
// use sum_slots_exponents / shift_exponents to assemble what an application
// needs.
GaloisKeySet galois_keygen(const FheContext& ctx, const SecretKey& sk,
                           const std::vector<u64>& exponents, const Seed& seed);

// Rebuilds the runtime caches after deserialization.
void rebuild_secret_caches(const FheContext& ctx, SecretKey& sk);
void rebuild_public_caches(const FheContext& ctx, PublicKey& pk);

}  // namespace hb::rlwe
