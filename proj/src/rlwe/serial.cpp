#include "hb/rlwe/serial.hpp"

#include <cstring>

namespace hb::rlwe {

namespace {

void write_header(std::vector<std::uint8_t>& out, const char* magic, const ParamsId& id) {
  put_bytes(out, magic, 4);
  put_u8(out, kContainerVersion);
  put_bytes(out, id.data(), id.size());
}

ByteReader open_container(const std::vector<std::uint8_t>& bytes, const char* magic,
                          const ParamsId* expect_id) {
  ByteReader r(bytes);
  char got[4];
  r.bytes(got, 4);
  if (std::memcmp(got, magic, 4) != 0) throw BadMagicError("container magic mismatch");
  std::uint8_t version = r.u8();
  if (version != kContainerVersion) throw BadVersionError("unsupported container version");
  ParamsId id{};
  r.bytes(id.data(), id.size());
  if (expect_id && id != *expect_id)
    throw FingerprintMismatchError("container params fingerprint mismatch");
  return r;
}

void write_rns_poly(const FheContext& ctx, const RnsPoly& p, std::vector<std::uint8_t>& out) {
  if (p.domain != Domain::kCoeff) {
    RnsPoly c = p;
    rns_to_coeff(c, ctx);
    write_rns_poly(ctx, c, out);
    return;
  }
  for (std::size_t j = 0; j < ctx.n(); ++j)
    for (std::size_t m = 0; m < ctx.mod_count(); ++m) put_u64le(out, p.comp[m][j]);
}

RnsPoly read_rns_poly(const FheContext& ctx, ByteReader& r) {
  RnsPoly p = RnsPoly::zero(ctx);
  for (std::size_t j = 0; j < ctx.n(); ++j) {
    for (std::size_t m = 0; m < ctx.mod_count(); ++m) {
      u64 v = r.u64le();
      if (v >= ctx.moduli()[m]) throw DecodeError("residue out of range for modulus");
      p.comp[m][j] = v;
    }
  }
  return p;
}

}  // namespace

std::string container_magic(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) return {};
  return std::string(bytes.begin(), bytes.begin() + 4);
}

std::vector<std::uint8_t> serialize_params(const FheParams& params) {
  std::vector<std::uint8_t> out;
  write_header(out, kMagicParams, params.fingerprint());
  auto payload = params.canonical_bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

FheParams parse_params(const std::vector<std::uint8_t>& bytes) {
  ByteReader r = open_container(bytes, kMagicParams, nullptr);
  FheParams p;
  p.ring_degree = r.u64le();
  std::uint8_t levels = r.u8();
  for (std::uint8_t i = 0; i < levels; ++i) p.ct_moduli.push_back(r.u64le());
  p.plain_modulus = r.u64le();
  p.noise_stddev = r.f64le();
  p.noise_bound = r.u64le();
  p.relin_decomp_log2 = r.u8();
  std::uint8_t width = r.u8();
  if (width != 8) throw DecodeError("unsupported residue width");
  r.expect_done();
  // header fingerprint must match the payload it claims to describe
  ParamsId in_header{};
  std::memcpy(in_header.data(), bytes.data() + 5, 16);
  if (p.fingerprint() != in_header)
    throw FingerprintMismatchError("params fingerprint does not match payload");
  return p;
}

std::vector<std::uint8_t> serialize_secret_key(const FheContext& ctx, const SecretKey& sk) {
  std::vector<std::uint8_t> out;
  write_header(out, kMagicSecretKey, ctx.id());
  for (auto v : sk.s) put_u8(out, static_cast<std::uint8_t>(v + 1));
  return out;
}

SecretKey parse_secret_key(const FheContext& ctx, const std::vector<std::uint8_t>& bytes) {
  ByteReader r = open_container(bytes, kMagicSecretKey, &ctx.id());
  SecretKey sk;
  sk.params_id = ctx.id();
  sk.s.resize(ctx.n());
  for (auto& v : sk.s) {
    std::uint8_t b = r.u8();
    if (b > 2) throw DecodeError("secret key coefficient out of range");
    v = static_cast<std::int8_t>(static_cast<int>(b) - 1);
  }
  r.expect_done();
  rebuild_secret_caches(ctx, sk);
  return sk;
}

std::vector<std::uint8_t> serialize_public_key(const FheContext& ctx, const PublicKey& pk) {
  std::vector<std::uint8_t> out;
  write_header(out, kMagicPublicKey, ctx.id());
  write_rns_poly(ctx, pk.pk0, out);
  write_rns_poly(ctx, pk.pk1, out);
  return out;
}

PublicKey parse_public_key(const FheContext& ctx, const std::vector<std::uint8_t>& bytes) {
  ByteReader r = open_container(bytes, kMagicPublicKey, &ctx.id());
  PublicKey pk;
  pk.params_id = ctx.id();
  pk.pk0 = read_rns_poly(ctx, r);
  pk.pk1 = read_rns_poly(ctx, r);
  r.expect_done();
  rebuild_public_caches(ctx, pk);
  return pk;
}

namespace {

void write_kswitch(const FheContext& ctx, const KSwitchKey& ks, std::vector<std::uint8_t>& out) {
  put_u8(out, static_cast<std::uint8_t>(ks.digits.size()));
  for (const auto& [k0, k1] : ks.digits) {
    write_rns_poly(ctx, k0, out);
    write_rns_poly(ctx, k1, out);
  }
}

KSwitchKey read_kswitch(const FheContext& ctx, ByteReader& r) {
  std::uint8_t count = r.u8();
  if (count != ctx.kswitch_digits()) throw DecodeError("key-switch digit count mismatch");
  KSwitchKey ks;
  for (std::uint8_t i = 0; i < count; ++i) {
    RnsPoly k0 = read_rns_poly(ctx, r);
    RnsPoly k1 = read_rns_poly(ctx, r);
    rns_to_ntt(k0, ctx);
    rns_to_ntt(k1, ctx);
    ks.digits.emplace_back(std::move(k0), std::move(k1));
  }
  return ks;
}

}  // namespace

std::vector<std::uint8_t> serialize_relin_key(const FheContext& ctx, const RelinKey& rk) {
  std::vector<std::uint8_t> out;
  write_header(out, kMagicRelinKey, ctx.id());
  write_kswitch(ctx, rk.ks, out);
  return out;
}

RelinKey parse_relin_key(const FheContext& ctx, const std::vector<std::uint8_t>& bytes) {
  ByteReader r = open_container(bytes, kMagicRelinKey, &ctx.id());
  RelinKey rk;
  rk.params_id = ctx.id();
  rk.ks = read_kswitch(ctx, r);
  r.expect_done();
  return rk;
}

std::vector<std::uint8_t> serialize_galois_keys(const FheContext& ctx, const GaloisKeySet& gks) {
  std::vector<std::uint8_t> out;
  write_header(out, kMagicGaloisKeys, ctx.id());
  put_u32le(out, static_cast<std::uint32_t>(gks.keys.size()));
  for (const auto& [exp, ks] : gks.keys) {
    put_u64le(out, exp);
    write_kswitch(ctx, ks, out);
  }
  return out;
}

GaloisKeySet parse_galois_keys(const FheContext& ctx, const std::vector<std::uint8_t>& bytes) {
  ByteReader r = open_container(bytes, kMagicGaloisKeys, &ctx.id());
  GaloisKeySet gks;
  gks.params_id = ctx.id();
  std::uint32_t count = r.u32le();
  for (std::uint32_t i = 0; i < count; ++i) {
    u64 exp = r.u64le();
    if ((exp & 1) == 0 || exp >= 2 * ctx.n()) throw DecodeError("invalid Galois exponent");
    gks.keys.emplace(exp, read_kswitch(ctx, r));
  }
  r.expect_done();
  return gks;
}

std::vector<std::uint8_t> serialize_ciphertext(const FheContext& ctx, const Ciphertext& ct) {
  if (ct.polys.size() < 2 || ct.polys.size() > 3) throw UsageError("unsupported ciphertext degree");
  std::vector<std::uint8_t> out;
  write_header(out, kMagicCiphertext, ctx.id());
  put_u8(out, static_cast<std::uint8_t>(ct.degree()));
  for (const auto& p : ct.polys) write_rns_poly(ctx, p, out);
  return out;
}

Ciphertext parse_ciphertext(const FheContext& ctx, const std::vector<std::uint8_t>& bytes) {
  ByteReader r = open_container(bytes, kMagicCiphertext, &ctx.id());
  std::uint8_t degree = r.u8();
  if (degree < 1 || degree > 2) throw DecodeError("unsupported ciphertext degree");
  Ciphertext ct;
  ct.params_id = ctx.id();
  for (std::uint8_t i = 0; i <= degree; ++i) ct.polys.push_back(read_rns_poly(ctx, r));
  r.expect_done();
  return ct;
}

}  // namespace hb::rlwe
