#include "hb/rlwe/encoder.hpp"

#include <algorithm>

namespace hb::rlwe {

BatchEncoder::BatchEncoder(ContextPtr ctx) : ctx_(std::move(ctx)) {
  std::size_t n = ctx_->n();
  u64 two_n = 2 * n;
  slot_index_.resize(n);
  u64 e = 1;  // 3^c mod 2N
  for (std::size_t c = 0; c < n / 2; ++c) {
    slot_index_[c] = static_cast<std::uint32_t>((e - 1) / 2);
    u64 neg = two_n - e;
    slot_index_[n / 2 + c] = static_cast<std::uint32_t>((neg - 1) / 2);
    e = (e * 3) % two_n;
  }
}

Plaintext BatchEncoder::zero() const {
  Plaintext pt;
  pt.coeffs.assign(ctx_->n(), 0);
  pt.params_id = ctx_->id();
  return pt;
}

Plaintext BatchEncoder::encode(const std::vector<std::int64_t>& values) const {
  std::size_t n = ctx_->n();
  if (values.size() > n) throw CapacityError("more values than slots");
  u64 t = ctx_->t();
  auto half = static_cast<std::int64_t>((t - 1) / 2);
  std::vector<u64> evals(n, 0);
  for (std::size_t j = 0; j < values.size(); ++j) {
    std::int64_t v = values[j];
    if (v < -half || v > half) throw OverflowError("slot value outside centered range mod t");
    evals[slot_index_[j]] = v >= 0 ? static_cast<u64>(v) : t - static_cast<u64>(-v);
  }
  ctx_->ntt_t().inverse(evals);
  Plaintext pt;
  pt.coeffs = std::move(evals);
  pt.params_id = ctx_->id();
  return pt;
}

std::vector<std::int64_t> BatchEncoder::decode(const Plaintext& pt) const {
  if (pt.params_id != ctx_->id()) throw UsageError("plaintext belongs to different params");
  std::size_t n = ctx_->n();
  if (pt.coeffs.size() != n) throw UsageError("plaintext has wrong length");
  u64 t = ctx_->t();
  std::vector<u64> evals = pt.coeffs;
  ctx_->ntt_t().forward(evals);
  std::vector<std::int64_t> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    u64 r = evals[slot_index_[j]];
    out[j] = r <= (t - 1) / 2 ? static_cast<std::int64_t>(r)
                              : static_cast<std::int64_t>(r) - static_cast<std::int64_t>(t);
  }
  return out;
}

u64 galois_exp_row_rotate(std::size_t n, std::size_t steps) {
  u64 two_n = 2 * static_cast<u64>(n);
  u64 e = 1;
  for (std::size_t i = 0; i < steps % (n / 2); ++i) e = (e * 3) % two_n;
  return e;
}

u64 galois_exp_row_swap(std::size_t n) { return 2 * static_cast<u64>(n) - 1; }

std::vector<u64> sum_slots_exponents(std::size_t n) {
  std::vector<u64> exps;
  for (std::size_t s = 1; s < n / 2; s <<= 1) exps.push_back(galois_exp_row_rotate(n, s));
  exps.push_back(galois_exp_row_swap(n));
  return exps;
}

std::vector<u64> shift_exponents(std::size_t n, std::int64_t k) {
  auto nn = static_cast<std::int64_t>(n);
  std::int64_t kk = ((k % nn) + nn) % nn;
  std::vector<u64> exps;
  if (kk == 0) return exps;
  auto a = static_cast<std::size_t>(kk) % (n / 2);
  bool swap_rows = static_cast<std::size_t>(kk) >= n / 2;
  if (a != 0) {
    u64 rot = galois_exp_row_rotate(n, a);
    exps.push_back(rot);
    exps.push_back((rot * galois_exp_row_swap(n)) % (2 * n));
  }
  if (swap_rows) exps.push_back(galois_exp_row_swap(n));
  std::sort(exps.begin(), exps.end());
  exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
  return exps;
}

}  // namespace hb::rlwe
