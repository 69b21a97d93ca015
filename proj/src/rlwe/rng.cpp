#include "hb/rlwe/rng.hpp"

namespace hb::rlwe {

RnsPoly sample_uniform_rns(const FheContext& ctx, Prng& prng) {
  RnsPoly p = RnsPoly::zero(ctx);
  for (std::size_t i = 0; i < ctx.mod_count(); ++i) {
    u64 q = ctx.moduli()[i];
    for (std::size_t j = 0; j < ctx.n(); ++j) p.comp[i][j] = prng.uniform_below(q);
  }
  return p;
}

std::vector<std::int8_t> sample_ternary(const FheContext& ctx, Prng& prng) {
  std::vector<std::int8_t> v(ctx.n());
  for (auto& x : v) x = static_cast<std::int8_t>(static_cast<int>(prng.uniform_below(3)) - 1);
  return v;
}

std::vector<std::int32_t> sample_gaussian(const FheContext& ctx, Prng& prng) {
  const auto& cdt = ctx.gaussian_cdt();
  auto B = static_cast<std::int32_t>(ctx.params().noise_bound);
  std::vector<std::int32_t> v(ctx.n());
  for (auto& x : v) {
    u64 r = prng.next_u64();
    std::size_t lo = 0, hi = cdt.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (r <= cdt[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    x = static_cast<std::int32_t>(lo) - B;
  }
  return v;
}

namespace {
template <typename T>
RnsPoly embed_small(const FheContext& ctx, const std::vector<T>& v) {
  if (v.size() != ctx.n()) throw UsageError("small vector length != N");
  RnsPoly p = RnsPoly::zero(ctx);
  for (std::size_t i = 0; i < ctx.mod_count(); ++i) {
    u64 q = ctx.moduli()[i];
    for (std::size_t j = 0; j < ctx.n(); ++j) {
      auto x = static_cast<std::int64_t>(v[j]);
      p.comp[i][j] = x >= 0 ? static_cast<u64>(x) % q : q - (static_cast<u64>(-x) % q);
      if (p.comp[i][j] == q) p.comp[i][j] = 0;
    }
  }
  return p;
}
}  // namespace

RnsPoly small_to_rns(const FheContext& ctx, const std::vector<std::int8_t>& v) {
  return embed_small(ctx, v);
}

RnsPoly small_to_rns(const FheContext& ctx, const std::vector<std::int32_t>& v) {
  return embed_small(ctx, v);
}

}  // namespace hb::rlwe
