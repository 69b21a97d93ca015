#include "hb/rlwe/poly.hpp"

namespace hb::rlwe {

void check_same_shape(const RingPoly& a, const RingPoly& b) {
  if (a.modulus != b.modulus) throw UsageError("ring polys have different moduli");
  if (a.coeffs.size() != b.coeffs.size()) throw UsageError("ring polys have different sizes");
  if (a.domain != b.domain) throw UsageError("ring polys are in different domains");
}

RingPoly poly_add(const RingPoly& a, const RingPoly& b) {
  check_same_shape(a, b);
  RingPoly r = a;
  kernels::mod_add_u64(r.coeffs.data(), a.coeffs.data(), b.coeffs.data(), a.coeffs.size(),
                       a.modulus);
  return r;
}

RingPoly poly_sub(const RingPoly& a, const RingPoly& b) {
  check_same_shape(a, b);
  RingPoly r = a;
  kernels::mod_sub_u64(r.coeffs.data(), a.coeffs.data(), b.coeffs.data(), a.coeffs.size(),
                       a.modulus);
  return r;
}

RingPoly poly_negate(const RingPoly& a) {
  RingPoly r = a;
  for (auto& c : r.coeffs) c = neg_mod(c, a.modulus);
  return r;
}

RingPoly poly_mul_ntt(const RingPoly& a, const RingPoly& b) {
  check_same_shape(a, b);
  if (a.domain != Domain::kNtt) throw UsageError("pointwise product requires NTT domain");
  RingPoly r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i)
    r.coeffs[i] = mul_mod(a.coeffs[i], b.coeffs[i], a.modulus);
  return r;
}

void to_ntt(RingPoly& p, const NttTable& table) {
  if (p.modulus != table.modulus()) throw UsageError("NTT table modulus mismatch");
  if (p.domain != Domain::kCoeff) throw UsageError("poly already in NTT domain");
  table.forward(p.coeffs);
  p.domain = Domain::kNtt;
}

void to_coeff(RingPoly& p, const NttTable& table) {
  if (p.modulus != table.modulus()) throw UsageError("NTT table modulus mismatch");
  if (p.domain != Domain::kNtt) throw UsageError("poly already in coefficient domain");
  table.inverse(p.coeffs);
  p.domain = Domain::kCoeff;
}

RingPoly poly_mul(const RingPoly& a, const RingPoly& b, const NttTable& table) {
  RingPoly x = a, y = b;
  if (x.domain == Domain::kCoeff) to_ntt(x, table);
  if (y.domain == Domain::kCoeff) to_ntt(y, table);
  RingPoly r = poly_mul_ntt(x, y);
  to_coeff(r, table);
  return r;
}

RnsPoly RnsPoly::zero(const FheContext& ctx, Domain d) {
  RnsPoly p;
  p.domain = d;
  p.comp.assign(ctx.mod_count(), std::vector<u64>(ctx.n(), 0));
  return p;
}

static void check_rns(const RnsPoly& a, const RnsPoly& b) {
  if (a.comp.size() != b.comp.size()) throw UsageError("RNS level mismatch");
  if (a.domain != b.domain) throw UsageError("RNS domain mismatch");
}

void rns_add_inplace(RnsPoly& a, const RnsPoly& b, const FheContext& ctx) {
  check_rns(a, b);
  for (std::size_t i = 0; i < a.comp.size(); ++i)
    kernels::mod_add_u64(a.comp[i].data(), a.comp[i].data(), b.comp[i].data(), ctx.n(),
                         ctx.moduli()[i]);
}

void rns_sub_inplace(RnsPoly& a, const RnsPoly& b, const FheContext& ctx) {
  check_rns(a, b);
  for (std::size_t i = 0; i < a.comp.size(); ++i)
    kernels::mod_sub_u64(a.comp[i].data(), a.comp[i].data(), b.comp[i].data(), ctx.n(),
                         ctx.moduli()[i]);
}

void rns_negate_inplace(RnsPoly& a, const FheContext& ctx) {
  for (std::size_t i = 0; i < a.comp.size(); ++i)
    for (auto& c : a.comp[i]) c = neg_mod(c, ctx.moduli()[i]);
}

void rns_mul_pointwise_inplace(RnsPoly& a, const RnsPoly& b, const FheContext& ctx) {
  check_rns(a, b);
  if (a.domain != Domain::kNtt) throw UsageError("pointwise product requires NTT domain");
  for (std::size_t i = 0; i < a.comp.size(); ++i) {
    u64 q = ctx.moduli()[i];
    for (std::size_t j = 0; j < ctx.n(); ++j) a.comp[i][j] = mul_mod(a.comp[i][j], b.comp[i][j], q);
  }
}

void rns_to_ntt(RnsPoly& p, const FheContext& ctx) {
  if (p.domain != Domain::kCoeff) throw UsageError("RNS poly already in NTT domain");
  for (std::size_t i = 0; i < p.comp.size(); ++i) ctx.ntt(i).forward(p.comp[i]);
  p.domain = Domain::kNtt;
}

void rns_to_coeff(RnsPoly& p, const FheContext& ctx) {
  if (p.domain != Domain::kNtt) throw UsageError("RNS poly already in coefficient domain");
  for (std::size_t i = 0; i < p.comp.size(); ++i) ctx.ntt(i).inverse(p.comp[i]);
  p.domain = Domain::kCoeff;
}

void rns_automorphism(RnsPoly& p, u64 g, const FheContext& ctx) {
  if (p.domain != Domain::kCoeff) throw UsageError("automorphism requires coefficient domain");
  if ((g & 1) == 0) throw UsageError("automorphism exponent must be odd");
  std::size_t n = ctx.n();
  u64 two_n = 2 * n;
  g %= two_n;
  for (std::size_t i = 0; i < p.comp.size(); ++i) {
    u64 q = ctx.moduli()[i];
    std::vector<u64> out(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      u64 e = (static_cast<u64>(j) * g) % two_n;  // X^j -> X^(j*g), X^N = -1
      u64 c = p.comp[i][j];
      if (e < n) {
        out[e] = c;
      } else {
        out[e - n] = neg_mod(c, q);
      }
    }
    p.comp[i] = std::move(out);
  }
}

}  // namespace hb::rlwe
