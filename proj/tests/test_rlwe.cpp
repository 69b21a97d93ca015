#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hb/rlwe/cipher.hpp"
#include "hb/rlwe/serial.hpp"

using namespace hb;
using namespace hb::rlwe;

namespace {

std::mt19937_64 rng(42);

std::vector<std::int64_t> random_slots(const FheContext& ctx, std::size_t count = 0) {
  if (count == 0) count = ctx.n();
  auto half = static_cast<std::int64_t>((ctx.t() - 1) / 2);
  std::vector<std::int64_t> v(count);
  for (auto& x : v)
    x = static_cast<std::int64_t>(rng() % (2 * static_cast<std::uint64_t>(half) + 1)) - half;
  return v;
}

std::int64_t center_mod_t(std::int64_t v, std::int64_t t) {
  std::int64_t r = v % t;
  if (r < 0) r += t;
  if (r > (t - 1) / 2) r -= t;
  return r;
}

struct Fixture {
  ContextPtr ctx;
  BatchEncoder enc;
  SecretKey sk;
  PublicKey pk;

  explicit Fixture(const FheParams& p, std::uint64_t seed = 1)
      : ctx(FheContext::create(p)), enc(ctx) {
    auto [s, k] = keygen(*ctx, seed_from_u64(seed));
    sk = std::move(s);
    pk = std::move(k);
  }

  Ciphertext enc_slots(const std::vector<std::int64_t>& v, std::uint64_t seed) {
    return encrypt(*ctx, pk, enc.encode(v), seed_from_u64(seed));
  }

  std::vector<std::int64_t> dec_slots(const Ciphertext& ct) { return enc.decode(decrypt(*ctx, sk, ct)); }
};

}  // namespace

TEST_CASE("toy parameter set is well-formed") {
  auto p = FheParams::toy();
  auto ctx = FheContext::create(p);
  CHECK(ctx->n() == 8);
  for (u64 q : p.ct_moduli) {
    CHECK(is_prime_u64(q));
    CHECK(q % 16 == 1);
  }
  CHECK(p.plain_modulus == 17);
  CHECK(ctx->aux_moduli().size() >= 2);
}

TEST_CASE("production parameter set matches its contract") {
  auto p = FheParams::production();
  CHECK(p.ring_degree == 4096);
  REQUIRE(p.ct_moduli.size() == 2);
  for (u64 q : p.ct_moduli) {
    CHECK(is_prime_u64(q));
    CHECK(q % 8192 == 1);
    CHECK(q >= (1ULL << 61));
    CHECK(q < (1ULL << 62));
  }
  CHECK(p.plain_modulus == 786433);
  CHECK(p.plain_modulus % 8192 == 1);
  auto ctx = FheContext::create(p);
  CHECK(ctx->max_scale() >= 128);
  CHECK(ctx->kswitch_digits() == 8);
}

TEST_CASE("invalid parameters are rejected") {
  auto p = FheParams::toy();
  p.ct_moduli = {19, 23};  // not ≡ 1 mod 2N
  CHECK_THROWS_AS(FheContext::create(p), ParameterError);
  p = FheParams::toy();
  p.ring_degree = 12;
  CHECK_THROWS_AS(FheContext::create(p), ParameterError);
  p = FheParams::toy();
  p.plain_modulus = 15;  // composite
  CHECK_THROWS_AS(FheContext::create(p), ParameterError);
}

TEST_CASE("batching encode/decode") {
  Fixture f(FheParams::toy());

  SUBCASE("zero vector gives the zero polynomial") {
    auto pt = f.enc.encode(std::vector<std::int64_t>(8, 0));
    for (u64 c : pt.coeffs) CHECK(c == 0);
  }

  SUBCASE("roundtrip with padding") {
    std::vector<std::int64_t> v{3, -5, 7, 1};
    auto back = f.enc.decode(f.enc.encode(v));
    for (std::size_t i = 0; i < 4; ++i) CHECK(back[i] == v[i]);
    for (std::size_t i = 4; i < 8; ++i) CHECK(back[i] == 0);
  }

  SUBCASE("range and capacity errors") {
    CHECK_THROWS_AS(f.enc.encode({9}), OverflowError);  // t=17, max centered 8
    CHECK_THROWS_AS(f.enc.encode(std::vector<std::int64_t>(9, 0)), CapacityError);
  }

  SUBCASE("slot-wise product law via ring multiplication") {
    auto u = random_slots(*f.ctx);
    auto v = random_slots(*f.ctx);
    RingPoly a{f.ctx->t(), Domain::kCoeff, f.enc.encode(u).coeffs};
    RingPoly b{f.ctx->t(), Domain::kCoeff, f.enc.encode(v).coeffs};
    RingPoly prod = poly_mul(a, b, f.ctx->ntt_t());
    Plaintext pt{prod.coeffs, f.ctx->id()};
    auto got = f.enc.decode(pt);
    auto t = static_cast<std::int64_t>(f.ctx->t());
    for (std::size_t i = 0; i < f.ctx->n(); ++i) CHECK(got[i] == center_mod_t(u[i] * v[i], t));
  }
}

TEST_CASE("encode roundtrip of 1..16 at N=16, t=97") {
  FheParams p;
  p.ring_degree = 16;
  p.ct_moduli = {prev_prime_congruent((1ULL << 31) - 1, 32, 1ULL << 29),
                 prev_prime_congruent(prev_prime_congruent((1ULL << 31) - 1, 32, 1ULL << 29) - 1,
                                      32, 1ULL << 29)};
  p.plain_modulus = 97;
  auto ctx = FheContext::create(p);
  BatchEncoder enc(ctx);
  std::vector<std::int64_t> v(16);
  for (int i = 0; i < 16; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  CHECK(enc.decode(enc.encode(v)) == v);
}

TEST_CASE("keygen determinism and roundtrip") {
  auto params = FheParams::toy();
  auto ctx = FheContext::create(params);
  auto [sk1, pk1] = keygen(*ctx, seed_from_u64(99));
  auto [sk2, pk2] = keygen(*ctx, seed_from_u64(99));
  CHECK(serialize_secret_key(*ctx, sk1) == serialize_secret_key(*ctx, sk2));
  CHECK(serialize_public_key(*ctx, pk1) == serialize_public_key(*ctx, pk2));
  auto [sk3, pk3] = keygen(*ctx, seed_from_u64(100));
  CHECK(serialize_secret_key(*ctx, sk1) != serialize_secret_key(*ctx, sk3));

  // pk0 + pk1*s = e with small coefficients
  RnsPoly check = pk1.pk1;
  rns_to_ntt(check, *ctx);
  rns_mul_pointwise_inplace(check, sk1.s_ntt, *ctx);
  rns_to_coeff(check, *ctx);
  rns_add_inplace(check, pk1.pk0, *ctx);
  u64 q0 = ctx->moduli()[0];
  for (u64 c : check.comp[0]) {
    u64 mag = c <= q0 / 2 ? c : q0 - c;
    CHECK(mag <= params.noise_bound);
  }
}

TEST_CASE("encrypt/decrypt roundtrip, toy exhaustive-ish") {
  Fixture f(FheParams::toy());
  SUBCASE("zero plaintext") {
    auto ct = f.enc_slots(std::vector<std::int64_t>(8, 0), 7);
    auto back = f.dec_slots(ct);
    for (auto v : back) CHECK(v == 0);
  }
  SUBCASE("1000 random plaintexts decrypt exactly") {
    for (int i = 0; i < 1000; ++i) {
      auto v = random_slots(*f.ctx);
      CHECK(f.dec_slots(f.enc_slots(v, static_cast<std::uint64_t>(i) + 100)) == v);
    }
  }
  SUBCASE("all extreme slot values") {
    std::vector<std::int64_t> v(8, 8);
    CHECK(f.dec_slots(f.enc_slots(v, 3)) == v);
    std::vector<std::int64_t> w(8, -8);
    CHECK(f.dec_slots(f.enc_slots(w, 4)) == w);
  }
}

TEST_CASE("homomorphic add/sub") {
  Fixture f(FheParams::toy());
  auto t = static_cast<std::int64_t>(f.ctx->t());
  for (int i = 0; i < 50; ++i) {
    auto u = random_slots(*f.ctx);
    auto v = random_slots(*f.ctx);
    auto cu = f.enc_slots(u, 1000 + static_cast<std::uint64_t>(i));
    auto cv = f.enc_slots(v, 2000 + static_cast<std::uint64_t>(i));
    auto sum = f.dec_slots(hadd(*f.ctx, cu, cv));
    auto diff = f.dec_slots(hsub(*f.ctx, cu, cv));
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(sum[j] == center_mod_t(u[j] + v[j], t));
      CHECK(diff[j] == center_mod_t(u[j] - v[j], t));
    }
  }
  SUBCASE("x - x = 0") {
    auto u = random_slots(*f.ctx);
    auto cu = f.enc_slots(u, 1);
    auto z = f.dec_slots(hsub(*f.ctx, cu, cu));
    for (auto v : z) CHECK(v == 0);
  }
  SUBCASE("hadd then hsub returns the original") {
    auto u = random_slots(*f.ctx);
    auto v = random_slots(*f.ctx);
    auto cu = f.enc_slots(u, 1);
    auto cv = f.enc_slots(v, 2);
    CHECK(f.dec_slots(hsub(*f.ctx, hadd(*f.ctx, cu, cv), cv)) == u);
  }
}

TEST_CASE("homomorphic multiplication") {
  Fixture f(FheParams::toy());
  auto t = static_cast<std::int64_t>(f.ctx->t());

  SUBCASE("identity: 1-vector times v") {
    auto v = random_slots(*f.ctx);
    auto ones = std::vector<std::int64_t>(8, 1);
    auto prod = f.dec_slots(hmul(*f.ctx, f.enc_slots(ones, 5), f.enc_slots(v, 6)));
    CHECK(prod == v);
  }

  SUBCASE("squaring") {
    auto v = random_slots(*f.ctx);
    auto cv = f.enc_slots(v, 9);
    auto sq = f.dec_slots(hmul(*f.ctx, cv, cv));
    for (std::size_t j = 0; j < 8; ++j) CHECK(sq[j] == center_mod_t(v[j] * v[j], t));
  }

  SUBCASE("random products match the slot oracle") {
    for (int i = 0; i < 100; ++i) {
      auto u = random_slots(*f.ctx);
      auto v = random_slots(*f.ctx);
      auto cu = f.enc_slots(u, 3000 + static_cast<std::uint64_t>(i));
      auto cv = f.enc_slots(v, 4000 + static_cast<std::uint64_t>(i));
      auto prod = f.dec_slots(hmul(*f.ctx, cu, cv));
      for (std::size_t j = 0; j < 8; ++j) CHECK(prod[j] == center_mod_t(u[j] * v[j], t));
    }
  }

  SUBCASE("degree-2 operand is rejected") {
    auto v = random_slots(*f.ctx);
    auto cv = f.enc_slots(v, 1);
    auto sq = hmul(*f.ctx, cv, cv);
    CHECK(sq.degree() == 2);
    CHECK_THROWS_AS(hmul(*f.ctx, sq, cv), UsageError);
  }
}

TEST_CASE("relinearization preserves the product") {
  Fixture f(FheParams::toy());
  auto t = static_cast<std::int64_t>(f.ctx->t());
  auto rk = relin_keygen(*f.ctx, f.sk, seed_from_u64(77));
  for (int i = 0; i < 30; ++i) {
    auto u = random_slots(*f.ctx);
    auto v = random_slots(*f.ctx);
    auto prod2 = hmul(*f.ctx, f.enc_slots(u, 10 + static_cast<std::uint64_t>(i)),
                      f.enc_slots(v, 50 + static_cast<std::uint64_t>(i)));
    auto prod1 = relinearize(*f.ctx, prod2, rk);
    CHECK(prod1.degree() == 1);
    auto got2 = f.dec_slots(prod2);
    auto got1 = f.dec_slots(prod1);
    CHECK(got1 == got2);
    for (std::size_t j = 0; j < 8; ++j) CHECK(got1[j] == center_mod_t(u[j] * v[j], t));
  }
  SUBCASE("relinearizing 0 * v is zero") {
    auto z = hmul(*f.ctx, f.enc_slots(std::vector<std::int64_t>(8, 0), 1),
                  f.enc_slots(random_slots(*f.ctx), 2));
    auto got = f.dec_slots(relinearize(*f.ctx, z, rk));
    for (auto x : got) CHECK(x == 0);
  }
  SUBCASE("degree-1 input is a usage error") {
    auto c = f.enc_slots(random_slots(*f.ctx), 3);
    CHECK_THROWS_AS(relinearize(*f.ctx, c, rk), UsageError);
  }
}

TEST_CASE("digit decomposition reassembles the lifted polynomial") {
  Fixture f(FheParams::toy());
  auto ct = f.enc_slots(random_slots(*f.ctx), 21);
  const auto& mods = f.ctx->moduli();
  int w = f.ctx->params().relin_decomp_log2;
  int d = f.ctx->kswitch_digits();
  u64 inv_q0 = inv_mod(mods[0] % mods[1], mods[1]);
  for (std::size_t c = 0; c < f.ctx->n(); ++c) {
    u64 r0 = ct.polys[1].comp[0][c], r1 = ct.polys[1].comp[1][c];
    unsigned __int128 x =
        static_cast<unsigned __int128>(mul_mod(sub_mod(r1, r0 % mods[1], mods[1]), inv_q0, mods[1])) *
            mods[0] +
        r0;
    unsigned __int128 reassembled = 0;
    for (int i = d - 1; i >= 0; --i) {
      u64 digit = static_cast<u64>(x >> (w * i)) & ((1ULL << w) - 1);
      CHECK(digit < (1ULL << w));
      reassembled = (reassembled << w) | digit;
    }
    CHECK(reassembled == x);
  }
}

TEST_CASE("Galois rotations") {
  Fixture f(FheParams::toy());
  std::size_t n = f.ctx->n();
  std::vector<u64> exps = sum_slots_exponents(n);
  for (std::int64_t k = 1; k < 8; ++k)
    for (u64 e : shift_exponents(n, k)) exps.push_back(e);
  auto gks = galois_keygen(*f.ctx, f.sk, exps, seed_from_u64(5));

  SUBCASE("rotation by 0 is the identity") {
    auto v = random_slots(*f.ctx);
    auto ct = f.enc_slots(v, 1);
    CHECK(f.dec_slots(rotate_slots(*f.ctx, f.enc, ct, 0, gks)) == v);
  }

  SUBCASE("rotation by every k matches the plain cyclic shift") {
    auto v = random_slots(*f.ctx);
    auto ct = f.enc_slots(v, 2);
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
      auto got = f.dec_slots(rotate_slots(*f.ctx, f.enc, ct, k, gks));
      for (std::size_t j = 0; j < n; ++j)
        CHECK(got[j] == v[(j + static_cast<std::size_t>(k)) % n]);
    }
  }

  SUBCASE("negative shifts wrap") {
    auto v = random_slots(*f.ctx);
    auto ct = f.enc_slots(v, 3);
    auto got = f.dec_slots(rotate_slots(*f.ctx, f.enc, ct, -1, gks));
    for (std::size_t j = 0; j < n; ++j) CHECK(got[j] == v[(j + n - 1) % n]);
  }

  SUBCASE("missing exponent is a key-material error") {
    GaloisKeySet partial;
    partial.params_id = f.ctx->id();
    auto ct = f.enc_slots(random_slots(*f.ctx), 4);
    CHECK_THROWS_AS(rotate_slots(*f.ctx, f.enc, ct, 1, partial), KeyMaterialError);
  }

  SUBCASE("empty exponent list is a usage error") {
    CHECK_THROWS_AS(galois_keygen(*f.ctx, f.sk, {}, seed_from_u64(1)), UsageError);
  }
}

TEST_CASE("sum_slots") {
  Fixture f(FheParams::toy());
  auto gks = galois_keygen(*f.ctx, f.sk, sum_slots_exponents(f.ctx->n()), seed_from_u64(6));
  auto t = static_cast<std::int64_t>(f.ctx->t());

  SUBCASE("one-hot sums to 1 in every slot") {
    for (std::size_t j = 0; j < f.ctx->n(); ++j) {
      std::vector<std::int64_t> v(f.ctx->n(), 0);
      v[j] = 1;
      auto got = f.dec_slots(sum_slots(*f.ctx, f.enc_slots(v, j + 1), gks));
      for (auto x : got) CHECK(x == 1);
    }
  }

  SUBCASE("random vectors sum to the plaintext total") {
    for (int i = 0; i < 20; ++i) {
      auto v = random_slots(*f.ctx);
      std::int64_t total = 0;
      for (auto x : v) total += x;
      auto got = f.dec_slots(sum_slots(*f.ctx, f.enc_slots(v, 600 + static_cast<std::uint64_t>(i)), gks));
      for (auto x : got) CHECK(x == center_mod_t(total, t));
    }
  }
}

TEST_CASE("sum_slots after relinearized product (inner-product composition)") {
  Fixture f(FheParams::toy());
  auto rk = relin_keygen(*f.ctx, f.sk, seed_from_u64(70));
  auto gks = galois_keygen(*f.ctx, f.sk, sum_slots_exponents(f.ctx->n()), seed_from_u64(71));
  auto t = static_cast<std::int64_t>(f.ctx->t());
  for (int i = 0; i < 20; ++i) {
    auto u = random_slots(*f.ctx);
    auto v = random_slots(*f.ctx);
    auto prod = relinearize(
        *f.ctx,
        hmul(*f.ctx, f.enc_slots(u, 800 + static_cast<std::uint64_t>(i)),
             f.enc_slots(v, 900 + static_cast<std::uint64_t>(i))),
        rk);
    auto summed = f.dec_slots(sum_slots(*f.ctx, prod, gks));
    std::int64_t ip = 0;
    for (std::size_t j = 0; j < f.ctx->n(); ++j) ip += u[j] * v[j];
    for (auto x : summed) CHECK(x == center_mod_t(ip, t));
  }
}

TEST_CASE("rotate after relinearized product decrypts to rotated products") {
  Fixture f(FheParams::toy());
  auto rk = relin_keygen(*f.ctx, f.sk, seed_from_u64(80));
  std::vector<u64> exps = shift_exponents(f.ctx->n(), 3);
  auto gks = galois_keygen(*f.ctx, f.sk, exps, seed_from_u64(81));
  auto t = static_cast<std::int64_t>(f.ctx->t());
  auto u = random_slots(*f.ctx);
  auto v = random_slots(*f.ctx);
  auto prod = relinearize(*f.ctx, hmul(*f.ctx, f.enc_slots(u, 1), f.enc_slots(v, 2)), rk);
  auto got = f.dec_slots(rotate_slots(*f.ctx, f.enc, prod, 3, gks));
  for (std::size_t j = 0; j < f.ctx->n(); ++j)
    CHECK(got[j] == center_mod_t(u[(j + 3) % 8] * v[(j + 3) % 8], t));
}

TEST_CASE("noise budget behavior (toy)") {
  Fixture f(FheParams::toy());
  auto v = random_slots(*f.ctx);
  auto fresh = f.enc_slots(v, 5);
  int fresh_budget = noise_budget(*f.ctx, f.sk, fresh);
  CHECK(fresh_budget > 0);
  auto sq = hmul(*f.ctx, fresh, fresh);
  int after = noise_budget(*f.ctx, f.sk, sq);
  CHECK(fresh_budget > after);  // monotone consumption
}

TEST_CASE("params mismatch is rejected across contexts") {
  Fixture toy(FheParams::toy());
  FheParams other = FheParams::toy();
  other.plain_modulus = 97;  // 97 ≡ 1 mod 16
  Fixture f2(other);
  auto ct = toy.enc_slots(random_slots(*toy.ctx), 1);
  CHECK_THROWS_AS(decrypt(*f2.ctx, f2.sk, ct), UsageError);
  auto ct2 = f2.enc_slots(random_slots(*f2.ctx), 1);
  CHECK_THROWS_AS(hadd(*toy.ctx, ct, ct2), UsageError);
}

TEST_CASE("noise budget at production parameters") {
  auto ctx = FheContext::create(FheParams::production());
  BatchEncoder enc(ctx);
  auto [sk, pk] = keygen(*ctx, seed_from_u64(777));

  SUBCASE("budget of a fresh zero encryption exceeds 60 bits") {
    auto ct = encrypt(*ctx, pk, enc.encode({}), seed_from_u64(778));
    CHECK(noise_budget(*ctx, sk, ct) > 60);
  }

  SUBCASE("budget drop across one multiplication is log2(t*N) plus a small constant") {
    int log2_tn = static_cast<int>(std::log2(786433.0 * 4096.0));  // 31
    for (int trial = 0; trial < 5; ++trial) {
      auto v = random_slots(*ctx);
      auto ct = encrypt(*ctx, pk, enc.encode(v), seed_from_u64(800 + static_cast<std::uint64_t>(trial)));
      int before = noise_budget(*ctx, sk, ct);
      auto sq = hmul(*ctx, ct, ct);
      int after = noise_budget(*ctx, sk, sq);
      int drop = before - after;
      // measured: drop = log2(t*N) + ~10 bits of constant terms
      CHECK(drop >= log2_tn - 4);
      CHECK(drop <= log2_tn + 18);
      CHECK(after > 10);
    }
  }

  SUBCASE("homomorphism laws hold on 1000 random production-scale cases") {
    auto t = static_cast<std::int64_t>(ctx->t());
    for (int trial = 0; trial < 1000; ++trial) {
      auto u = random_slots(*ctx, 64);
      auto v = random_slots(*ctx, 64);
      auto cu = encrypt(*ctx, pk, enc.encode(u), seed_from_u64(9000 + 2 * static_cast<std::uint64_t>(trial)));
      auto cv = encrypt(*ctx, pk, enc.encode(v), seed_from_u64(9001 + 2 * static_cast<std::uint64_t>(trial)));
      auto sum = enc.decode(decrypt(*ctx, sk, hadd(*ctx, cu, cv)));
      auto diff = enc.decode(decrypt(*ctx, sk, hsub(*ctx, cu, cv)));
      for (std::size_t j = 0; j < 64; ++j) {
        CHECK(sum[j] == center_mod_t(u[j] + v[j], t));
        CHECK(diff[j] == center_mod_t(u[j] - v[j], t));
      }
    }
  }
}
