#include "hb/rlwe/keys.hpp"

namespace hb::rlwe {

namespace {

// k0 = -(a*s + e) + 2^(w*i) * target, k1 = a, both left in NTT domain.
KSwitchKey make_kswitch_key(const FheContext& ctx, const SecretKey& sk, const RnsPoly& target_ntt,
                            Prng& prng) {
  KSwitchKey key;
  int w = ctx.params().relin_decomp_log2;
  int d = ctx.kswitch_digits();
  key.digits.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    RnsPoly a = sample_uniform_rns(ctx, prng);
    RnsPoly e = small_to_rns(ctx, sample_gaussian(ctx, prng));
    RnsPoly a_ntt = a;
    rns_to_ntt(a_ntt, ctx);
    RnsPoly k0 = a_ntt;
    rns_mul_pointwise_inplace(k0, sk.s_ntt, ctx);  // a*s
    rns_to_coeff(k0, ctx);
    rns_add_inplace(k0, e, ctx);
    rns_negate_inplace(k0, ctx);  // -(a*s + e)
    // + 2^(w*i) * target
    RnsPoly shifted = target_ntt;
    for (std::size_t m = 0; m < ctx.mod_count(); ++m) {
      u64 q = ctx.moduli()[m];
      u64 factor = pow_mod(2, static_cast<u64>(w) * static_cast<u64>(i), q);
      for (auto& c : shifted.comp[m]) c = mul_mod(c, factor, q);
    }
    rns_to_coeff(shifted, ctx);
    rns_add_inplace(k0, shifted, ctx);
    rns_to_ntt(k0, ctx);
    key.digits.emplace_back(std::move(k0), std::move(a_ntt));
  }
  return key;
}

}  // namespace

void rebuild_secret_caches(const FheContext& ctx, SecretKey& sk) {
  sk.s_ntt = small_to_rns(ctx, sk.s);
  rns_to_ntt(sk.s_ntt, ctx);
  sk.s2_ntt = sk.s_ntt;
  rns_mul_pointwise_inplace(sk.s2_ntt, sk.s_ntt, ctx);
}

void rebuild_public_caches(const FheContext& ctx, PublicKey& pk) {
  pk.pk0_ntt = pk.pk0;
  rns_to_ntt(pk.pk0_ntt, ctx);
  pk.pk1_ntt = pk.pk1;
  rns_to_ntt(pk.pk1_ntt, ctx);
}

std::pair<SecretKey, PublicKey> keygen(const FheContext& ctx, const Seed& seed) {
  Prng prng(seed);
  SecretKey sk;
  sk.params_id = ctx.id();
  sk.s = sample_ternary(ctx, prng);
  rebuild_secret_caches(ctx, sk);

  PublicKey pk;
  pk.params_id = ctx.id();
  pk.pk1 = sample_uniform_rns(ctx, prng);
  RnsPoly e = small_to_rns(ctx, sample_gaussian(ctx, prng));
  // pk0 = -(pk1 * s) + e, so pk0 + pk1*s = e
  RnsPoly prod = pk.pk1;
  rns_to_ntt(prod, ctx);
  rns_mul_pointwise_inplace(prod, sk.s_ntt, ctx);
  rns_to_coeff(prod, ctx);
  rns_negate_inplace(prod, ctx);
  rns_add_inplace(prod, e, ctx);
  pk.pk0 = std::move(prod);
  rebuild_public_caches(ctx, pk);
  return {std::move(sk), std::move(pk)};
}

RelinKey relin_keygen(const FheContext& ctx, const SecretKey& sk, const Seed& seed) {
  if (sk.params_id != ctx.id()) throw UsageError("secret key belongs to different params");
  Prng prng(seed);
  RelinKey rk;
  rk.params_id = ctx.id();
  rk.ks = make_kswitch_key(ctx, sk, sk.s2_ntt, prng);
  return rk;
}

GaloisKeySet galois_keygen(const FheContext& ctx, const SecretKey& sk,
                           const std::vector<u64>& exponents, const Seed& seed) {
  if (sk.params_id != ctx.id()) throw UsageError("secret key belongs to different params");
  if (exponents.empty()) throw UsageError("empty Galois exponent list");
  Prng prng(seed);
  GaloisKeySet gks;
  gks.params_id = ctx.id();
  for (u64 g : exponents) {
    u64 two_n = 2 * ctx.n();
    u64 ge = g % two_n;
    if ((ge & 1) == 0) throw UsageError("Galois exponent must be odd");
    if (gks.keys.count(ge)) continue;
    // sigma_g(s) in NTT form
    RnsPoly sg = small_to_rns(ctx, sk.s);
    rns_automorphism(sg, ge, ctx);
    rns_to_ntt(sg, ctx);
    gks.keys.emplace(ge, make_kswitch_key(ctx, sk, sg, prng));
  }
  return gks;
}

}  // namespace hb::rlwe
