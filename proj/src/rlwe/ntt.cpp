#include "hb/rlwe/ntt.hpp"

namespace hb::rlwe {

NttTable::NttTable(u64 q, std::size_t n) : q_(q), n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) throw ParameterError("NTT size must be a power of two >= 2");
  if (q < 3 || (q - 1) % (2 * n) != 0) throw ParameterError("modulus lacks a 2N-th primitive root");
  log_n_ = __builtin_ctzll(n);
  psi_ = find_primitive_root_2n(q, 2 * static_cast<u64>(n));
  u64 omega = mul_mod(psi_, psi_, q);
  u64 psi_inv = inv_mod(psi_, q);
  u64 omega_inv = inv_mod(omega, q);
  u64 n_inv = inv_mod(static_cast<u64>(n) % q, q);

  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (int b = 0; b < log_n_; ++b)
      if (i & (1ULL << b)) r |= 1U << (log_n_ - 1 - b);
    bitrev_[i] = r;
  }

  twist_.resize(n);
  twist_sh_.resize(n);
  untwist_.resize(n);
  untwist_sh_.resize(n);
  u64 w = 1, wi = n_inv;
  for (std::size_t j = 0; j < n; ++j) {
    twist_[j] = w;
    twist_sh_[j] = shoup_precompute(w, q);
    untwist_[j] = wi;
    untwist_sh_[j] = shoup_precompute(wi, q);
    w = mul_mod(w, psi_, q);
    wi = mul_mod(wi, psi_inv, q);
  }

  fw_tw_.resize(n - 1);
  fw_tw_sh_.resize(n - 1);
  inv_tw_.resize(n - 1);
  inv_tw_sh_.resize(n - 1);
  std::size_t off = 0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    u64 wlen = pow_mod(omega, static_cast<u64>(n / len), q);
    u64 wlen_inv = pow_mod(omega_inv, static_cast<u64>(n / len), q);
    u64 f = 1, g = 1;
    for (std::size_t j = 0; j < len / 2; ++j) {
      fw_tw_[off + j] = f;
      fw_tw_sh_[off + j] = shoup_precompute(f, q);
      inv_tw_[off + j] = g;
      inv_tw_sh_[off + j] = shoup_precompute(g, q);
      f = mul_mod(f, wlen, q);
      g = mul_mod(g, wlen_inv, q);
    }
    off += len / 2;
  }
}

void NttTable::cyclic(u64* a, const std::vector<u64>& tw, const std::vector<u64>& tw_sh) const {
  for (std::size_t i = 0; i < n_; ++i) {
    std::uint32_t r = bitrev_[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  std::size_t off = 0;
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    std::size_t half = len / 2;
    for (std::size_t i = 0; i < n_; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        u64 u = a[i + j];
        u64 v = mul_mod_shoup(a[i + j + half], tw[off + j], tw_sh[off + j], q_);
        a[i + j] = add_mod(u, v, q_);
        a[i + j + half] = sub_mod(u, v, q_);
      }
    }
    off += half;
  }
}

void NttTable::forward(u64* a) const {
  for (std::size_t j = 0; j < n_; ++j) a[j] = mul_mod_shoup(a[j], twist_[j], twist_sh_[j], q_);
  cyclic(a, fw_tw_, fw_tw_sh_);
}

void NttTable::inverse(u64* a) const {
  cyclic(a, inv_tw_, inv_tw_sh_);
  for (std::size_t j = 0; j < n_; ++j) a[j] = mul_mod_shoup(a[j], untwist_[j], untwist_sh_[j], q_);
}

std::vector<u64> negacyclic_convolve_schoolbook(const std::vector<u64>& a, const std::vector<u64>& b,
                                                u64 q) {
  if (a.size() != b.size()) throw UsageError("convolution operands differ in size");
  std::size_t n = a.size();
  std::vector<u64> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u64 p = mul_mod(a[i], b[j], q);
      std::size_t k = i + j;
      if (k < n) {
        c[k] = add_mod(c[k], p, q);
      } else {
        c[k - n] = sub_mod(c[k - n], p, q);  // X^N = -1
      }
    }
  }
  return c;
}

}  // namespace hb::rlwe
