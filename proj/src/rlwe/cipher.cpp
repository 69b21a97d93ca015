#include "hb/rlwe/cipher.hpp"

#include <cstring>

namespace hb::rlwe {

namespace {

void check_params(const ParamsId& a, const ParamsId& b) {
  if (a != b) throw UsageError("params fingerprint mismatch");
}

// round(q * m~ / t) per coefficient, embedded in the RNS basis. m~ is the
// centered representative of the plaintext coefficient.
RnsPoly scale_plain_to_q(const FheContext& ctx, const Plaintext& pt) {
  RnsPoly out = RnsPoly::zero(ctx);
  u64 t = ctx.t();
  u64 t_half = (t - 1) / 2;
  for (std::size_t j = 0; j < ctx.n(); ++j) {
    u64 c = pt.coeffs[j] % t;
    bool neg = c > t_half;
    u64 mag = neg ? t - c : c;
    U384 a = ctx.q_total();
    a.mul_u64(mag);
    a.add_u64(t_half);
    a.divmod_u64(t);  // floor((q*mag + (t-1)/2) / t) = round(q*mag/t)
    for (std::size_t m = 0; m < ctx.mod_count(); ++m) {
      u64 q = ctx.moduli()[m];
      u64 r = a.mod_u64(q);
      out.comp[m][j] = neg ? neg_mod(r, q) : r;
    }
  }
  return out;
}

// Centered lift of one RNS coefficient: returns magnitude and sign.
struct CenteredWide {
  bool neg;
  U384 mag;
};

CenteredWide lift_q_centered(const FheContext& ctx, const u64* residues) {
  U384 x = ctx.lift_q(residues);
  if (x.cmp(ctx.q_half()) > 0) {
    U384 m = ctx.q_total();
    m.sub(x);
    return {true, m};
  }
  return {false, x};
}

// round(t * x / q) for a centered x given as (neg, mag); result mod each q_i.
void scale_round_to_q(const FheContext& ctx, bool neg, U384 mag, u64* out) {
  mag.mul_u64(ctx.t());
  mag.add(ctx.q_half());
  for (u64 q : ctx.moduli()) mag.divmod_u64(q);  // nested floor = floor(x/q)
  for (std::size_t m = 0; m < ctx.mod_count(); ++m) {
    u64 q = ctx.moduli()[m];
    u64 r = mag.mod_u64(q);
    out[m] = neg ? neg_mod(r, q) : r;
  }
}

// Aux-basis residues of a ciphertext poly under the centered lift.
// Layout: aux[j][coeff] for aux prime j.
std::vector<std::vector<u64>> lift_poly_to_aux(const FheContext& ctx, const RnsPoly& p) {
  const auto& aux = ctx.aux_moduli();
  std::size_t n = ctx.n(), k = aux.size(), levels = ctx.mod_count();
  std::vector<std::vector<u64>> out(k, std::vector<u64>(n));
  if (levels == 2) {
    // u128 fast path: q < 2^126
    u64 q0 = ctx.moduli()[0], q1 = ctx.moduli()[1];
    u64 inv_q0 = inv_mod(q0 % q1, q1);
    u128 q = static_cast<u128>(q0) * q1;
    u128 q_half = q >> 1;
    for (std::size_t c = 0; c < n; ++c) {
      u64 r0 = p.comp[0][c], r1 = p.comp[1][c];
      u64 d = mul_mod(sub_mod(r1, r0 % q1, q1), inv_q0, q1);
      u128 x = static_cast<u128>(d) * q0 + r0;
      bool neg = x > q_half;
      u128 mag = neg ? q - x : x;
      for (std::size_t j = 0; j < k; ++j) {
        u64 r = static_cast<u64>(mag % aux[j]);
        out[j][c] = neg ? neg_mod(r, aux[j]) : r;
      }
    }
  } else {
    std::vector<u64> res(levels);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t m = 0; m < levels; ++m) res[m] = p.comp[m][c];
      CenteredWide cw = lift_q_centered(ctx, res.data());
      for (std::size_t j = 0; j < k; ++j) {
        u64 r = cw.mag.mod_u64(aux[j]);
        out[j][c] = cw.neg ? neg_mod(r, aux[j]) : r;
      }
    }
  }
  return out;
}

// Key switch: decompose poly C (coefficient domain, mod q) into base-2^w
// digits and accumulate digit_i * key_i. Returns (acc0, acc1) in the
// coefficient domain.
std::pair<RnsPoly, RnsPoly> kswitch(const FheContext& ctx, const RnsPoly& c,
                                    const KSwitchKey& key) {
  int w = ctx.params().relin_decomp_log2;
  int d = ctx.kswitch_digits();
  if (key.digits.size() != static_cast<std::size_t>(d))
    throw KeyMaterialError("key-switch key has wrong digit count");
  std::size_t n = ctx.n(), levels = ctx.mod_count();

  // digits of the [0, q) lift of each coefficient
  std::vector<std::vector<u64>> digits(static_cast<std::size_t>(d), std::vector<u64>(n));
  u64 mask = (w == 64) ? ~0ULL : ((1ULL << w) - 1);
  if (levels == 2) {
    u64 q0 = ctx.moduli()[0], q1 = ctx.moduli()[1];
    u64 inv_q0 = inv_mod(q0 % q1, q1);
    for (std::size_t c_i = 0; c_i < n; ++c_i) {
      u64 r0 = c.comp[0][c_i], r1 = c.comp[1][c_i];
      u64 dd = mul_mod(sub_mod(r1, r0 % q1, q1), inv_q0, q1);
      u128 x = static_cast<u128>(dd) * q0 + r0;
      for (int i = 0; i < d; ++i) digits[static_cast<std::size_t>(i)][c_i] = static_cast<u64>(x >> (w * i)) & mask;
    }
  } else {
    std::vector<u64> res(levels);
    for (std::size_t c_i = 0; c_i < n; ++c_i) {
      for (std::size_t m = 0; m < levels; ++m) res[m] = c.comp[m][c_i];
      U384 x = ctx.lift_q(res.data());
      for (int i = 0; i < d; ++i)
        digits[static_cast<std::size_t>(i)][c_i] = x.divmod_u64(1ULL << w) & mask;
    }
  }

  RnsPoly acc0 = RnsPoly::zero(ctx, Domain::kNtt);
  RnsPoly acc1 = RnsPoly::zero(ctx, Domain::kNtt);
  std::vector<u64> tmp(n);
  for (int i = 0; i < d; ++i) {
    const auto& dig = digits[static_cast<std::size_t>(i)];
    const auto& k0 = key.digits[static_cast<std::size_t>(i)].first;
    const auto& k1 = key.digits[static_cast<std::size_t>(i)].second;
    for (std::size_t m = 0; m < levels; ++m) {
      u64 q = ctx.moduli()[m];
      std::memcpy(tmp.data(), dig.data(), n * sizeof(u64));
      // digit values are < 2^w <= q, already reduced
      ctx.ntt(m).forward(tmp.data());
      for (std::size_t j = 0; j < n; ++j) {
        acc0.comp[m][j] = add_mod(acc0.comp[m][j], mul_mod(tmp[j], k0.comp[m][j], q), q);
        acc1.comp[m][j] = add_mod(acc1.comp[m][j], mul_mod(tmp[j], k1.comp[m][j], q), q);
      }
    }
  }
  rns_to_coeff(acc0, ctx);
  rns_to_coeff(acc1, ctx);
  return {std::move(acc0), std::move(acc1)};
}

}  // namespace

Ciphertext encrypt(const FheContext& ctx, const PublicKey& pk, const Plaintext& pt,
                   const Seed& seed) {
  check_params(pk.params_id, ctx.id());
  check_params(pt.params_id, ctx.id());
  if (pt.coeffs.size() != ctx.n()) throw UsageError("plaintext has wrong length");
  Prng prng(seed);
  RnsPoly u = small_to_rns(ctx, sample_ternary(ctx, prng));
  RnsPoly e1 = small_to_rns(ctx, sample_gaussian(ctx, prng));
  RnsPoly e2 = small_to_rns(ctx, sample_gaussian(ctx, prng));

  rns_to_ntt(u, ctx);
  RnsPoly c0 = u;
  rns_mul_pointwise_inplace(c0, pk.pk0_ntt, ctx);
  rns_to_coeff(c0, ctx);
  rns_add_inplace(c0, e1, ctx);
  RnsPoly delta_m = scale_plain_to_q(ctx, pt);
  rns_add_inplace(c0, delta_m, ctx);

  RnsPoly c1 = u;
  rns_mul_pointwise_inplace(c1, pk.pk1_ntt, ctx);
  rns_to_coeff(c1, ctx);
  rns_add_inplace(c1, e2, ctx);

  Ciphertext ct;
  ct.params_id = ctx.id();
  ct.polys.push_back(std::move(c0));
  ct.polys.push_back(std::move(c1));
  return ct;
}

namespace {

// c0 + c1*s (+ c2*s^2) in the coefficient domain.
RnsPoly inner_product_with_key(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct) {
  RnsPoly acc = RnsPoly::zero(ctx, Domain::kNtt);
  RnsPoly c1 = ct.polys[1];
  rns_to_ntt(c1, ctx);
  rns_mul_pointwise_inplace(c1, sk.s_ntt, ctx);
  rns_add_inplace(acc, c1, ctx);
  if (ct.polys.size() == 3) {
    RnsPoly c2 = ct.polys[2];
    rns_to_ntt(c2, ctx);
    rns_mul_pointwise_inplace(c2, sk.s2_ntt, ctx);
    rns_add_inplace(acc, c2, ctx);
  }
  rns_to_coeff(acc, ctx);
  rns_add_inplace(acc, ct.polys[0], ctx);
  return acc;
}

}  // namespace

Plaintext decrypt(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct) {
  check_params(sk.params_id, ctx.id());
  check_params(ct.params_id, ctx.id());
  if (ct.polys.size() < 2 || ct.polys.size() > 3) throw UsageError("unsupported ciphertext degree");
  RnsPoly d = inner_product_with_key(ctx, sk, ct);

  Plaintext pt;
  pt.params_id = ctx.id();
  pt.coeffs.assign(ctx.n(), 0);
  u64 t = ctx.t();
  std::size_t levels = ctx.mod_count();
  std::vector<u64> res(levels);
  for (std::size_t j = 0; j < ctx.n(); ++j) {
    for (std::size_t m = 0; m < levels; ++m) res[m] = d.comp[m][j];
    CenteredWide cw = lift_q_centered(ctx, res.data());
    cw.mag.mul_u64(t);
    cw.mag.add(ctx.q_half());
    for (u64 q : ctx.moduli()) cw.mag.divmod_u64(q);
    u64 m_mag = cw.mag.limb(0) % t;  // quotient is <= t/2 already
    pt.coeffs[j] = cw.neg ? (m_mag == 0 ? 0 : t - m_mag) : m_mag;
  }
  return pt;
}

namespace {

Ciphertext linear_op(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b, bool add) {
  check_params(a.params_id, ctx.id());
  check_params(b.params_id, ctx.id());
  if (a.polys.size() != b.polys.size()) throw UsageError("ciphertext degree mismatch");
  Ciphertext r = a;
  for (std::size_t i = 0; i < r.polys.size(); ++i) {
    if (add) {
      rns_add_inplace(r.polys[i], b.polys[i], ctx);
    } else {
      rns_sub_inplace(r.polys[i], b.polys[i], ctx);
    }
  }
  return r;
}

}  // namespace

Ciphertext hadd(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b) {
  return linear_op(ctx, a, b, true);
}

Ciphertext hsub(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b) {
  return linear_op(ctx, a, b, false);
}

Ciphertext hmul(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b) {
  check_params(a.params_id, ctx.id());
  check_params(b.params_id, ctx.id());
  if (a.degree() != 1 || b.degree() != 1)
    throw UsageError("hmul requires degree-1 operands (single multiplication depth)");

  const auto& aux = ctx.aux_moduli();
  std::size_t n = ctx.n(), k = aux.size();
  bool square = &a == &b;

  // lift + forward NTT in the auxiliary basis
  auto a0 = lift_poly_to_aux(ctx, a.polys[0]);
  auto a1 = lift_poly_to_aux(ctx, a.polys[1]);
  for (std::size_t j = 0; j < k; ++j) {
    ctx.aux_ntt(j).forward(a0[j]);
    ctx.aux_ntt(j).forward(a1[j]);
  }
  std::vector<std::vector<u64>> b0, b1;
  if (!square) {
    b0 = lift_poly_to_aux(ctx, b.polys[0]);
    b1 = lift_poly_to_aux(ctx, b.polys[1]);
    for (std::size_t j = 0; j < k; ++j) {
      ctx.aux_ntt(j).forward(b0[j]);
      ctx.aux_ntt(j).forward(b1[j]);
    }
  }

  // tensor components t0 = a0*b0, t1 = a0*b1 + a1*b0, t2 = a1*b1
  std::vector<std::vector<u64>> t0(k), t1(k), t2(k);
  for (std::size_t j = 0; j < k; ++j) {
    u64 p = aux[j];
    t0[j].resize(n);
    t1[j].resize(n);
    t2[j].resize(n);
    const auto& x0 = a0[j];
    const auto& x1 = a1[j];
    const auto& y0 = square ? a0[j] : b0[j];
    const auto& y1 = square ? a1[j] : b1[j];
    for (std::size_t c = 0; c < n; ++c) {
      t0[j][c] = mul_mod(x0[c], y0[c], p);
      t2[j][c] = mul_mod(x1[c], y1[c], p);
      if (square) {
        u64 cross = mul_mod(x0[c], x1[c], p);
        t1[j][c] = add_mod(cross, cross, p);
      } else {
        t1[j][c] = add_mod(mul_mod(x0[c], y1[c], p), mul_mod(x1[c], y0[c], p), p);
      }
    }
    ctx.aux_ntt(j).inverse(t0[j]);
    ctx.aux_ntt(j).inverse(t1[j]);
    ctx.aux_ntt(j).inverse(t2[j]);
  }

  // reconstruct exact integers, scale by t/q with exact rounding
  Ciphertext out;
  out.params_id = ctx.id();
  out.polys.assign(3, RnsPoly::zero(ctx));
  std::vector<u64> res(k);
  std::vector<u64> scaled(ctx.mod_count());
  const std::vector<std::vector<u64>>* tensors[3] = {&t0, &t1, &t2};
  for (int comp = 0; comp < 3; ++comp) {
    const auto& tv = *tensors[comp];
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t j = 0; j < k; ++j) res[j] = tv[j][c];
      U384 x = ctx.lift_aux(res.data());
      bool neg = x.cmp(ctx.aux_half()) > 0;
      if (neg) {
        U384 m = ctx.aux_total();
        m.sub(x);
        x = m;
      }
      scale_round_to_q(ctx, neg, x, scaled.data());
      for (std::size_t m = 0; m < ctx.mod_count(); ++m)
        out.polys[static_cast<std::size_t>(comp)].comp[m][c] = scaled[m];
    }
  }
  return out;
}

Ciphertext relinearize(const FheContext& ctx, const Ciphertext& ct, const RelinKey& rk) {
  check_params(ct.params_id, ctx.id());
  check_params(rk.params_id, ctx.id());
  if (ct.degree() != 2) throw UsageError("relinearize requires a degree-2 ciphertext");
  auto [acc0, acc1] = kswitch(ctx, ct.polys[2], rk.ks);
  Ciphertext out;
  out.params_id = ctx.id();
  out.polys.resize(2);
  out.polys[0] = ct.polys[0];
  rns_add_inplace(out.polys[0], acc0, ctx);
  out.polys[1] = ct.polys[1];
  rns_add_inplace(out.polys[1], acc1, ctx);
  return out;
}

Ciphertext multiply_plain(const FheContext& ctx, const Ciphertext& ct, const Plaintext& pt) {
  check_params(ct.params_id, ctx.id());
  check_params(pt.params_id, ctx.id());
  // centered lift of the plaintext polynomial into each modulus
  RnsPoly p = RnsPoly::zero(ctx);
  u64 t = ctx.t();
  u64 t_half = (t - 1) / 2;
  for (std::size_t j = 0; j < ctx.n(); ++j) {
    u64 c = pt.coeffs[j] % t;
    bool neg = c > t_half;
    u64 mag = neg ? t - c : c;
    for (std::size_t m = 0; m < ctx.mod_count(); ++m) {
      u64 q = ctx.moduli()[m];
      p.comp[m][j] = neg ? neg_mod(mag % q, q) : mag % q;
    }
  }
  rns_to_ntt(p, ctx);
  Ciphertext out = ct;
  for (auto& poly : out.polys) {
    rns_to_ntt(poly, ctx);
    rns_mul_pointwise_inplace(poly, p, ctx);
    rns_to_coeff(poly, ctx);
  }
  return out;
}

Ciphertext apply_galois(const FheContext& ctx, const Ciphertext& ct, u64 exponent,
                        const GaloisKeySet& gks) {
  check_params(ct.params_id, ctx.id());
  check_params(gks.params_id, ctx.id());
  if (ct.degree() != 1) throw UsageError("Galois automorphism requires a degree-1 ciphertext");
  u64 g = exponent % (2 * ctx.n());
  auto it = gks.keys.find(g);
  if (it == gks.keys.end()) throw KeyMaterialError("missing Galois key for exponent");

  RnsPoly c0 = ct.polys[0];
  RnsPoly c1 = ct.polys[1];
  rns_automorphism(c0, g, ctx);
  rns_automorphism(c1, g, ctx);
  auto [acc0, acc1] = kswitch(ctx, c1, it->second);
  Ciphertext out;
  out.params_id = ctx.id();
  out.polys.resize(2);
  rns_add_inplace(acc0, c0, ctx);
  out.polys[0] = std::move(acc0);
  out.polys[1] = std::move(acc1);
  return out;
}

Ciphertext rotate_slots(const FheContext& ctx, const BatchEncoder& encoder, const Ciphertext& ct,
                        std::int64_t k, const GaloisKeySet& gks) {
  std::size_t n = ctx.n();
  auto nn = static_cast<std::int64_t>(n);
  std::int64_t kk = ((k % nn) + nn) % nn;
  if (kk == 0) return ct;

  auto a = static_cast<std::size_t>(kk) % (n / 2);
  bool swap_rows = static_cast<std::size_t>(kk) >= n / 2;
  Ciphertext cur = ct;
  if (a != 0) {
    u64 rot = galois_exp_row_rotate(n, a);
    u64 rot_swapped = (rot * galois_exp_row_swap(n)) % (2 * n);
    Ciphertext y = apply_galois(ctx, cur, rot, gks);
    Ciphertext z = apply_galois(ctx, cur, rot_swapped, gks);
    // keep y where the rotated column stayed in its row, take z where it
    // wrapped into the other row: wrap columns are [N/2 - a, N/2)
    std::vector<std::int64_t> keep(n, 0), wrap(n, 0);
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c_i = 0; c_i < n / 2; ++c_i) {
        bool wraps = c_i >= n / 2 - a;
        (wraps ? wrap : keep)[r * (n / 2) + c_i] = 1;
      }
    }
    Ciphertext masked_y = multiply_plain(ctx, y, encoder.encode(keep));
    Ciphertext masked_z = multiply_plain(ctx, z, encoder.encode(wrap));
    cur = hadd(ctx, masked_y, masked_z);
  }
  if (swap_rows) cur = apply_galois(ctx, cur, galois_exp_row_swap(n), gks);
  return cur;
}

Ciphertext sum_slots(const FheContext& ctx, const Ciphertext& ct, const GaloisKeySet& gks) {
  check_params(ct.params_id, ctx.id());
  if (ct.degree() != 1) throw UsageError("sum_slots requires a degree-1 ciphertext");
  std::size_t n = ctx.n();
  Ciphertext acc = ct;
  for (std::size_t s = 1; s < n / 2; s <<= 1) {
    Ciphertext rotated = apply_galois(ctx, acc, galois_exp_row_rotate(n, s), gks);
    acc = hadd(ctx, acc, rotated);
  }
  Ciphertext swapped = apply_galois(ctx, acc, galois_exp_row_swap(n), gks);
  return hadd(ctx, acc, swapped);
}

int noise_budget(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct) {
  check_params(sk.params_id, ctx.id());
  check_params(ct.params_id, ctx.id());
  RnsPoly d = inner_product_with_key(ctx, sk, ct);
  Plaintext m = decrypt(ctx, sk, ct);

  u64 t = ctx.t();
  u64 t_half = (t - 1) / 2;
  std::size_t levels = ctx.mod_count();
  std::vector<u64> res(levels);
  U384 worst(0);
  for (std::size_t j = 0; j < ctx.n(); ++j) {
    for (std::size_t i = 0; i < levels; ++i) res[i] = d.comp[i][j];
    CenteredWide dc = lift_q_centered(ctx, res.data());
    // reference point: round(q * m~ / t) with the same sign convention
    u64 c = m.coeffs[j] % t;
    bool mneg = c > t_half;
    u64 mmag = mneg ? t - c : c;
    U384 ref = ctx.q_total();
    ref.mul_u64(mmag);
    ref.add_u64(t_half);
    ref.divmod_u64(t);
    // |d - sign*ref|
    U384 diff;
    if (dc.neg == mneg || ref.is_zero() || dc.mag.is_zero()) {
      diff = dc.mag.cmp(ref) >= 0 ? dc.mag : ref;
      U384 smaller = dc.mag.cmp(ref) >= 0 ? ref : dc.mag;
      diff.sub(smaller);
    } else {
      diff = dc.mag;
      diff.add(ref);
    }
    if (diff.cmp(worst) > 0) worst = diff;
  }
  // floor(log2(q / (2t(worst+1))))
  U384 denom = worst;
  denom.add_u64(1);
  denom.mul_u64(2 * t);
  if (denom.cmp(ctx.q_total()) >= 0) return 0;
  int shift = ctx.q_total().bit_length() - denom.bit_length();
  while (shift > 0 && denom.shl(shift).cmp(ctx.q_total()) > 0) --shift;
  return shift;
}

}  // namespace hb::rlwe
