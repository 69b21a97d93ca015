#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hb/rlwe/serial.hpp"

using namespace hb;
using namespace hb::rlwe;

namespace {

struct Fixture {
  ContextPtr ctx;
  BatchEncoder enc;
  SecretKey sk;
  PublicKey pk;

  Fixture() : ctx(FheContext::create(FheParams::toy())), enc(ctx) {
    auto [s, k] = keygen(*ctx, seed_from_u64(11));
    sk = std::move(s);
    pk = std::move(k);
  }
};

}  // namespace

TEST_CASE("params container roundtrip and self-fingerprint") {
  auto p = FheParams::toy();
  auto bytes = serialize_params(p);
  CHECK(container_magic(bytes) == "HBPR");
  auto back = parse_params(bytes);
  CHECK(back.fingerprint() == p.fingerprint());
  CHECK(serialize_params(back) == bytes);

  SUBCASE("corrupted payload is detected by the fingerprint") {
    auto bad = bytes;
    bad[kContainerHeaderBytes + 2] ^= 1;
    CHECK_THROWS_AS(parse_params(bad), FingerprintMismatchError);
  }
}

TEST_CASE("every container type roundtrips bit-exactly") {
  Fixture f;
  auto rk = relin_keygen(*f.ctx, f.sk, seed_from_u64(1));
  auto gks = galois_keygen(*f.ctx, f.sk, sum_slots_exponents(f.ctx->n()), seed_from_u64(2));
  auto ct = encrypt(*f.ctx, f.pk, f.enc.encode({1, -2, 3}), seed_from_u64(3));
  auto ct2 = hmul(*f.ctx, ct, ct);

  auto sk_b = serialize_secret_key(*f.ctx, f.sk);
  CHECK(container_magic(sk_b) == "HBSK");
  CHECK(serialize_secret_key(*f.ctx, parse_secret_key(*f.ctx, sk_b)) == sk_b);

  auto pk_b = serialize_public_key(*f.ctx, f.pk);
  CHECK(container_magic(pk_b) == "HBPK");
  CHECK(serialize_public_key(*f.ctx, parse_public_key(*f.ctx, pk_b)) == pk_b);

  auto rk_b = serialize_relin_key(*f.ctx, rk);
  CHECK(container_magic(rk_b) == "HBRK");
  CHECK(serialize_relin_key(*f.ctx, parse_relin_key(*f.ctx, rk_b)) == rk_b);

  auto gk_b = serialize_galois_keys(*f.ctx, gks);
  CHECK(container_magic(gk_b) == "HBGK");
  CHECK(serialize_galois_keys(*f.ctx, parse_galois_keys(*f.ctx, gk_b)) == gk_b);

  auto ct_b = serialize_ciphertext(*f.ctx, ct);
  CHECK(container_magic(ct_b) == "HBCT");
  CHECK(serialize_ciphertext(*f.ctx, parse_ciphertext(*f.ctx, ct_b)) == ct_b);

  auto ct2_b = serialize_ciphertext(*f.ctx, ct2);
  CHECK(serialize_ciphertext(*f.ctx, parse_ciphertext(*f.ctx, ct2_b)) == ct2_b);

  SUBCASE("deserialized material still works") {
    auto sk2 = parse_secret_key(*f.ctx, sk_b);
    auto ct_back = parse_ciphertext(*f.ctx, ct_b);
    auto pt = decrypt(*f.ctx, sk2, ct_back);
    auto v = f.enc.decode(pt);
    CHECK(v[0] == 1);
    CHECK(v[1] == -2);
    CHECK(v[2] == 3);
  }
}

TEST_CASE("degree-1 and degree-2 ciphertext payload sizes") {
  Fixture f;
  auto ct = encrypt(*f.ctx, f.pk, f.enc.encode({1}), seed_from_u64(3));
  auto bytes = serialize_ciphertext(*f.ctx, ct);
  std::size_t n = f.ctx->n(), L = f.ctx->mod_count();
  CHECK(bytes.size() == kContainerHeaderBytes + 1 + 2 * n * L * 8);
  auto ct2 = hmul(*f.ctx, ct, ct);
  CHECK(serialize_ciphertext(*f.ctx, ct2).size() == kContainerHeaderBytes + 1 + 3 * n * L * 8);
}

TEST_CASE("distinct decode errors") {
  Fixture f;
  auto ct = encrypt(*f.ctx, f.pk, f.enc.encode({5}), seed_from_u64(9));
  auto bytes = serialize_ciphertext(*f.ctx, ct);

  SUBCASE("bad magic") {
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(parse_ciphertext(*f.ctx, bad), BadMagicError);
  }
  SUBCASE("bad version") {
    auto bad = bytes;
    bad[4] = 0x02;
    CHECK_THROWS_AS(parse_ciphertext(*f.ctx, bad), BadVersionError);
  }
  SUBCASE("fingerprint mismatch") {
    auto bad = bytes;
    bad[6] ^= 0xff;
    CHECK_THROWS_AS(parse_ciphertext(*f.ctx, bad), FingerprintMismatchError);
  }
  SUBCASE("truncation") {
    auto bad = bytes;
    bad.pop_back();
    CHECK_THROWS_AS(parse_ciphertext(*f.ctx, bad), DecodeError);
  }
  SUBCASE("trailing garbage") {
    auto bad = bytes;
    bad.push_back(0);
    CHECK_THROWS_AS(parse_ciphertext(*f.ctx, bad), DecodeError);
  }
  SUBCASE("wrong container type for the parser") {
    CHECK_THROWS_AS(parse_public_key(*f.ctx, bytes), BadMagicError);
  }
}

TEST_CASE("payload byte flips are detected or change the decrypted value") {
  // Run at production parameters: the chance that a surviving flip rounds
  // back to the same plaintext is ~1/t, negligible at t=786433.
  auto ctx = FheContext::create(FheParams::production());
  BatchEncoder enc(ctx);
  auto [sk, pk] = keygen(*ctx, seed_from_u64(11));
  std::mt19937_64 rng(17);
  std::vector<std::int64_t> v0(ctx->n());
  for (std::size_t i = 0; i < v0.size(); ++i) v0[i] = static_cast<std::int64_t>(i % 97) - 48;
  auto ct = encrypt(*ctx, pk, enc.encode(v0), seed_from_u64(31));
  auto bytes = serialize_ciphertext(*ctx, ct);
  auto baseline = enc.decode(decrypt(*ctx, sk, ct));
  int detected = 0, changed = 0, silent_same = 0, header_hits = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto bad = bytes;
    std::size_t pos = rng() % bad.size();
    std::uint8_t flip = static_cast<std::uint8_t>(1u << (rng() % 8));
    bad[pos] ^= flip;
    bool header = pos < kContainerHeaderBytes;
    bool was_detected = false;
    try {
      auto back = parse_ciphertext(*ctx, bad);
      auto got = enc.decode(decrypt(*ctx, sk, back));
      if (got == baseline) {
        ++silent_same;
      } else {
        ++changed;
      }
    } catch (const DecodeError&) {
      ++detected;
      was_detected = true;
    }
    if (header) {
      ++header_hits;
      CHECK(was_detected);  // every header flip must be caught
    }
  }
  CHECK(detected > 0);
  CHECK(changed > 0);
  CHECK(silent_same == 0);
}
